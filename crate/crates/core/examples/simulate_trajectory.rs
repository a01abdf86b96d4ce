//! A trajectory of the quintic family with W along it, plus the
//! non-homogeneous example against its explicit solution.

use ratlyap::dynamics::{family_nonhomog_counterexample, family_quintic, simulate, write_csv, Trajectory};
use ratlyap::verify::{trajectory_decrease, RationalLyapunov};

fn main() -> ratlyap::Result<()> {
    let f = family_quintic(0.05);
    let w = RationalLyapunov::quintic_w();
    let traj = simulate(&f, &[1.0, 0.2], 1e-3, 40.0)?;
    let last = traj.last();
    println!(
        "quintic, theta = 0.05: x(40) = ({:.4}, {:.4}), W: {:.4} -> {:.4}, max step increase {:.2e}",
        last[0],
        last[1],
        w.eval(&traj.states[0]),
        w.eval(last),
        trajectory_decrease(|x| w.eval(x), &traj)
    );

    // Every 4000th sample as CSV.
    let keep = |k: &usize| k % 4000 == 0;
    let coarse = Trajectory {
        times: traj.times.iter().enumerate().filter(|(k, _)| keep(k)).map(|(_, t)| *t).collect(),
        states: traj.states.iter().enumerate().filter(|(k, _)| keep(k)).map(|(_, x)| x.clone()).collect(),
        step: traj.step * 4000.0,
        divergence: None,
    };
    let v: Vec<f64> = coarse.states.iter().map(|x| w.eval(x)).collect();
    write_csv(std::io::stdout(), &coarse, &[("W", v)])?;

    let t = 2f64.ln();
    let e = simulate(&family_nonhomog_counterexample(), &[2.0, 3.0], 1e-4, t)?;
    println!(
        "x' = -x + xy, y' = -y from (2, 3): x(ln 2) = {:?}, expected ({}, 1.5)",
        e.last(),
        1.5f64.exp()
    );
    Ok(())
}
