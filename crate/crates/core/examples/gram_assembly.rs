//! The affine Gram system for one level, as sparse triplets.

use ratlyap::dynamics::family_quintic;
use ratlyap::sosgram::{assemble, CandidateShape};

fn main() -> ratlyap::Result<()> {
    let f = family_quintic(0.05);
    let shape = CandidateShape::new(2, 4, 1, 5)?;
    let sys = assemble(&f, &shape)?;
    println!(
        "(s, r) = (4, 1): {} rows, P is {}x{}, Q is {}x{}",
        sys.rows.len(),
        sys.p_size(),
        sys.p_size(),
        sys.q_size(),
        sys.q_size()
    );
    for row in sys.rows.iter().take(3) {
        let terms: Vec<String> = row
            .entries
            .iter()
            .map(|e| format!("{:+}*{:?}[{},{}]", e.coeff, e.block, e.i, e.j))
            .collect();
        println!("  {}: {} = 0", row.monomial, terms.join(" "));
    }
    let triplets = sys.to_triplets();
    println!("{} nonzero triplets", triplets.triplets.len());
    Ok(())
}
