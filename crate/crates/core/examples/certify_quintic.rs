//! The hierarchy on the quintic family, rational and polynomial-only.

use ratlyap::dynamics::family_quintic;
use ratlyap::hierarchy::{search, RMode, SearchConfig};

fn main() -> ratlyap::Result<()> {
    let f = family_quintic(0.05);
    for r_mode in [RMode::Free, RMode::ZeroOnly] {
        let config = SearchConfig {
            s_max: 8,
            r_mode,
            ..SearchConfig::default()
        };
        let report = search(&f, &config)?;
        println!("{r_mode:?}:");
        for l in &report.levels {
            println!("  ({}, {}) {:?} in {:.3}s", l.s, l.r, l.status, l.wall_time);
        }
        println!("  {}", report.summary);
        if let Some(cert) = &report.certificate {
            println!("  V numerator: {}", cert.lyapunov()?.numerator());
        }
    }
    Ok(())
}
