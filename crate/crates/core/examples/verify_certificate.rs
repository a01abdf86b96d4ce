//! Independent checks: a certificate, a mutated copy, and sampled
//! falsification of a hand-written candidate.

use ratlyap::dynamics::family_quintic;
use ratlyap::hierarchy::certify_level;
use ratlyap::sdp::SdpSettings;
use ratlyap::verify::{check_candidate, check_certificate, RationalLyapunov, VerifySettings};

fn main() -> ratlyap::Result<()> {
    let f = family_quintic(0.05);
    let settings = VerifySettings::default();
    let cert = certify_level(&f, 4, 1, &SdpSettings::default(), &settings)?
        .certificate
        .expect("(4, 1) is feasible for theta = 0.05");

    let check = check_certificate(&f, &cert, &settings)?;
    let d = &check.diagnostics;
    println!(
        "passed = {}: residual {:.2e}, min eig P {:.3}, min eig Q {:.3}",
        check.passed, d.identity_residual, d.min_eig_p, d.min_eig_q
    );

    let mut bad = cert.clone();
    bad.p.set(0, 0, bad.p.get(0, 0) + 10.0);
    let check = check_certificate(&f, &bad, &settings)?;
    println!("P[0,0] + 10: passed = {}, {:?}", check.passed, check.failures);

    let other = check_certificate(&family_quintic(1.0), &cert, &settings)?;
    println!("same certificate, theta = 1.0: passed = {}", other.passed);

    let w = RationalLyapunov::quintic_w();
    for theta in [0.05, 1.5, 0.0] {
        let c = check_candidate(&w, &family_quintic(theta), &settings)?;
        println!("W vs theta = {theta}: passed = {}, min decrease ratio {:.2e}", c.passed, c.min_decrease_ratio);
    }
    Ok(())
}
