//! Exact and Monte Carlo return probabilities of the simple random walk
//! on the Vicsek graph, with the fitted decay exponent.

use spinal_lab::generators::vicsek;
use spinal_lab::walk::{decay_fit, return_probabilities_exact, return_probabilities_mc};

fn main() {
    let v = vicsek(2, 7).unwrap();
    let (g, cut) = (v.spinal.graph(), v.spinal.truncation());
    let exact = return_probabilities_exact(g, cut, v.center, 2000).unwrap();
    let mc = return_probabilities_mc(g, cut, v.center, 200, 100_000, 1).unwrap();
    let se = mc.std_errors.as_ref().unwrap();
    for t in [10, 50, 100, 200] {
        let i = t / 2;
        println!("t = {t:>3}: exact {:.6}  mc {:.6} ± {:.6}", exact.entries[i].1, mc.entries[i].1, se[i]);
    }
    let fit = decay_fit(&exact, (100, 2000)).unwrap();
    let nu = 5f64.ln() / 3f64.ln();
    println!("p_t(o, o) ~ t^{:.4}; -ν/(ν+1) = {:.4}", fit.slope, -nu / (nu + 1.0));
    println!("largest mass error {:.1e}", exact.max_mass_error);
}
