//! Random Hurwitz matrices certify at (s, r) = (2, 0); the recovered P
//! solves a Lyapunov equation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ratlyap::dynamics::{family_linear, random_hurwitz};
use ratlyap::hierarchy::{search, SearchConfig};

fn main() -> ratlyap::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let config = SearchConfig {
        s_max: 2,
        ..SearchConfig::default()
    };
    for n in [2, 3] {
        let a = random_hurwitz(n, 0.1, &mut rng);
        let report = search(&family_linear(&a)?, &config)?;
        let cert = report.certificate.expect("Hurwitz matrices have quadratic certificates");
        let p = cert.p.matrix();
        let lyap = a.transpose() * p + p * &a;
        println!("A = {a:.3}P = {p:.3}A'P + PA = {lyap:.3}");
        println!("eigenvalues of A'P + PA: {:?}", lyap.symmetric_eigenvalues().as_slice());
    }
    Ok(())
}
