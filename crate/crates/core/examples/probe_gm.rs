use entlab_core::seesaw::*;
use entlab_core::subspaces::*;
use std::f64::consts::FRAC_PI_2;
use std::time::Instant;

fn main() {
    let t0 = Instant::now();
    let cfg = SeesawConfig::with_seed(41);
    for d in [3usize, 4] {
        let pr = tripartite_projectors(d).unwrap();
        let sa = pr.sym.add(&pr.antisym).unwrap();
        let t = Instant::now();
        let r1 = min_projector_overlap(&sa, &cfg).unwrap();
        let with_bar = sa.add(&pr.antichiral).unwrap();
        let r2 = min_projector_overlap(&with_bar, &cfg).unwrap();
        let r3 = fully_separable_max(&pr.chiral, &cfg).unwrap();
        println!(
            "d={d}: minSA={:.10} (want 0.25)  minSAJbar={:.10} (want {:.10})  maxJ={:.10} (want {:.10})  [{:?}]",
            r1.value, r2.value, 5.0 / 9.0, r3.value, 4.0 / 9.0, t.elapsed()
        );
    }
    let t = Instant::now();
    let m = four_qubit_m();
    let cfg4 = SeesawConfig::for_four_parties(41);
    let r = max_product_overlap(&m, &cfg4).unwrap();
    println!("M: lambda2={:.10} (want {:.10})  [{:?}]", r.value, 2.0 / 9.0, t.elapsed());
    let t = Instant::now();
    let q4 = four_qutrit_chiral();
    let g = geometric_measure(&q4, &cfg4).unwrap();
    println!("four-qutrit chiral: G={:.10} (want 0.875)  [{:?}]", g, t.elapsed());
    for d in [3usize, 4, 5] {
        let t = Instant::now();
        let psi = phase_state(d, FRAC_PI_2).unwrap();
        let g = geometric_measure(&psi, &cfg).unwrap();
        let want = 1.0 - 1.0 / (2.0 * (d as f64 - 1.0));
        println!("phase d={d}: G={:.10} (want {:.10})  [{:?}]", g, want, t.elapsed());
    }
    for d in [6usize, 7, 8] {
        let t = Instant::now();
        let basis = flip_conjugate_basis(d, None).unwrap();
        let g = geometric_measure(&basis.vectors[0], &cfg).unwrap();
        let bound = flip_conjugate_analytic_bound(d);
        println!("flip d={d}: G={:.10} bound={:.10} ok={} [{:?}]", g, bound, bound <= g + 1e-9, t.elapsed());
    }
    for d in [11usize, 12] {
        let t = Instant::now();
        let r = chi_norm_max(d, 0, &cfg).unwrap();
        let df = d as f64;
        println!("chi d={d}: {:.10} (want {:.10}) [{:?}]", r.value, df * df / (df * df - 1.0), t.elapsed());
    }
    println!("total {:?}", t0.elapsed());
}
