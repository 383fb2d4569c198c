use bdeform_core::maps::{aggregate_weighted_series, enumerate_constellations, MonKind};
use bdeform_core::tau::tau_k;
use bdeform_core::decomp::solve_decomposition;
use std::time::Instant;

fn main() {
    let t0 = Instant::now();
    let maps = enumerate_constellations(3, 2).unwrap();
    println!("enumerate(3,2): {} maps ({:?})", maps.len(), t0.elapsed());
    let t0 = Instant::now();
    let _ = aggregate_weighted_series(2, 2, MonKind::IntegralCoherent).unwrap();
    println!("aggregate(2,2): {:?}", t0.elapsed());
    let t0 = Instant::now();
    let tau = tau_k(2, 4).unwrap();
    println!("tau_k(2,4): {} terms ({:?})", tau.num_terms(), t0.elapsed());
    let t0 = Instant::now();
    let conn = tau.connected_log_derivative().unwrap();
    println!("log-deriv: {} terms ({:?})", conn.num_terms(), t0.elapsed());
    let t0 = Instant::now();
    let fam = solve_decomposition(2, 3).unwrap();
    println!("solve_decomposition(2,3): ({:?})", t0.elapsed());
    let _ = fam;
    let t0 = Instant::now();
    let fam = solve_decomposition(2, 4).unwrap();
    println!("solve_decomposition(2,4): ({:?})", t0.elapsed());
    let _ = fam;
}
