//! Parsing, arithmetic and monomial bases.

use ratlyap::polyalg::{dot_with_x, HomogPoly, MonomialBasis};

fn main() -> ratlyap::Result<()> {
    let p = HomogPoly::parse("x1^4 + x2^4", 2)?;
    let q = HomogPoly::norm_sq(2);
    println!("p = {p}");
    println!("p * |x|^2 = {}", p.mul(&q)?);

    let grad = p.gradient();
    println!("dp/dx1 = {}, dp/dx2 = {}", grad[0], grad[1]);
    // Euler: <x, grad p> = deg(p) p
    println!("<x, grad p> = {}", dot_with_x(&grad)?);

    let basis = MonomialBasis::enumerate(2, 3);
    let names: Vec<String> = basis.monomials().iter().map(|m| m.to_string()).collect();
    println!("degree-3 monomials: [{}]", names.join(", "));
    println!("p(0.6, 0.8) = {}", p.eval(&[0.6, 0.8]));

    let json = serde_json::to_string(&ratlyap::polyalg::PolyJson::from(&p))?;
    println!("json: {json}");
    Ok(())
}
