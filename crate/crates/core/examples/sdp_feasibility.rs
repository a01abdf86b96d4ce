//! Shift the Gram system to plain PSD blocks, export it, and solve.

use ratlyap::dynamics::family_quintic;
use ratlyap::sdp::{solve, to_sdp, SdpSettings};
use ratlyap::sosgram::{assemble, CandidateShape};

fn main() -> ratlyap::Result<()> {
    let f = family_quintic(0.05);
    for (s, r) in [(4, 0), (4, 1)] {
        let sys = assemble(&f, &CandidateShape::new(2, s, r, 5)?)?;
        let problem = to_sdp(&sys);
        let sol = solve(&problem, &SdpSettings::default());
        println!(
            "(s, r) = ({s}, {r}): {:?} [{}], residual {:?}, min eigenvalues {:?}",
            sol.status, sol.solver_status, sol.max_residual, sol.min_eigenvalues
        );
    }

    let sys = assemble(&f, &CandidateShape::new(2, 2, 0, 5)?)?;
    let text = to_sdp(&sys).to_sdpa_text();
    println!("--- (2, 0) in SDPA-like form, first lines ---");
    for line in text.lines().take(8) {
        println!("{line}");
    }
    Ok(())
}
