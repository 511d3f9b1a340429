//! Wall-clock scaling of both cover solvers on the corridor family.
//!
//! `scaling [per_side] [n ...]`, defaults `5 50 100 200 400`. Prints one line
//! per `n` and the log-log slopes.

use std::time::Instant;

use subtraj_bench::{corridor, loglog_slope, CORRIDOR_DELTA};
use subtraj_core::fast::solve_sc_fast;
use subtraj_core::sc::solve_sc;

const ELL: usize = 6;

fn main() {
    let args: Vec<usize> = std::env::args()
        .skip(1)
        .map(|a| a.parse().unwrap_or_else(|_| panic!("not a count: {a}")))
        .collect();
    let per_side = args.first().copied().unwrap_or(5);
    let ns: Vec<usize> = if args.len() > 1 { args[1..].to_vec() } else { vec![50, 100, 200, 400] };
    let (mut slow, mut fast) = (Vec::new(), Vec::new());
    for &n in &ns {
        let p = corridor(n, per_side, 7);
        let t = Instant::now();
        let a = solve_sc(&p, CORRIDOR_DELTA, ELL).expect("solve_sc");
        let ta = t.elapsed().as_secs_f64();
        let t = Instant::now();
        let b = solve_sc_fast(&p, CORRIDOR_DELTA, ELL).expect("cover_a_fast");
        let tb = t.elapsed().as_secs_f64();
        println!(
            "n = {n:>5}  |S| = {:>4}  sc {ta:>8.3}s ({} centers, {} points)  fast {tb:>8.3}s ({} centers, {} points, K = {:?})",
            a.stats.simplified_vertices,
            a.centers.len(),
            a.stats.points,
            b.centers.len(),
            b.stats.points,
            b.stats.final_k
        );
        slow.push(ta);
        fast.push(tb);
    }
    if ns.len() >= 2 {
        let nf: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
        let (ss, sf) = (loglog_slope(&nf, &slow), loglog_slope(&nf, &fast));
        println!("log-log slope: sc {ss:.3}, fast {sf:.3}, difference {:.3}", ss - sf);
    }
}
