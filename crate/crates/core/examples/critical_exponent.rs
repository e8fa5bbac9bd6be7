//! The critical exponent p_c and the lower bound on p from the dimension
//! inequality, for a few dimension triples.

use spinal_lab::analysis::{beta_from_nu, critical_p, dim_inequality, p_lower_bound};

fn main() {
    let log3_5 = 5f64.ln() / 3f64.ln();
    let cases = [(1.0, log3_5, log3_5), (1.0, 2.0, 2.0), (1.0, 3.0, 2.5), (1.5, 3.0, 3.0), (1.2, 2.6, 4.0)];
    println!("{:>6} {:>6} {:>6} {:>10} {:>10} {:>12}", "δ_Σ", "δ_G", "ν", "p_c", "p_c'", "1/p+1/p'");
    for (ds, dg, nu) in cases {
        let pc = critical_p(ds, dg, nu).unwrap();
        let pl = p_lower_bound(beta_from_nu(nu), ds, dg).unwrap();
        println!("{ds:>6.3} {dg:>6.3} {nu:>6.3} {pc:>10.6} {pl:>10.6} {:>12.2e}", 1.0 / pc + 1.0 / pl - 1.0);
    }
    let beta = beta_from_nu(log3_5);
    for p in [1.5, 2.0, 4.0] {
        let d = dim_inequality(p, beta, 1.0, log3_5);
        println!("vicsek, p = {p}: slack {:+.4}, inequality holds: {}", d.slack, d.holds);
    }
}
