//! Exact Laurent polynomial arithmetic in cyclically indexed variables.

use num_bigint::BigInt;
use tubecc::LaurentPoly;

fn main() -> tubecc::Result<()> {
    let r = 3;
    let x = |i| LaurentPoly::var(r, i);
    // (x2 + x3) / x1, with x4 read as x1
    let inv_x1 =
        LaurentPoly::monomial(r, 1, tubecc::ExponentVector::from_subscripts(r, &[], &[4]))?;
    let p = (&x(2) + &x(3)).mul(&inv_x1)?;
    println!("p        = {p}");
    println!("p^3      = {}", p.pow(3)?);
    println!("p(1,1,1) = {}", p.eval_all_ones());
    println!("shifted  = {}", p.shift_variables(1));

    let huge = p.scale(&BigInt::parse_bytes(b"123456789012345678901234567890", 10).unwrap());
    let json = huge.to_json();
    println!("json     = {json}");
    assert_eq!(LaurentPoly::from_json(&json)?, huge);
    Ok(())
}
