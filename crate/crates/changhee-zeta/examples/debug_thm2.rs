// temporary diagnostic for the thm2 residual; not part of the deliverable
use changhee_zeta::changhee::{h_series_oracle, h_single_closed};
use changhee_zeta::powerseries::gf_changhee_coeffs;
use changhee_zeta::{Complex64, QParams};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn draw_disk(rng: &mut ChaCha8Rng, rmax: f64) -> Complex64 {
    loop {
        let re = rng.gen_range(-rmax..rmax);
        let im = rng.gen_range(-rmax..rmax);
        let z = Complex64::new(re, im);
        let n = z.norm();
        if n >= 0.05 && n <= rmax {
            return z;
        }
    }
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = (0.0f64, String::new());
    for draw in 0..200 {
        let q = draw_disk(&mut rng, 0.8);
        let u = draw_disk(&mut rng, 0.8);
        let w1 = rng.gen_range(0.2..3.0);
        let v1 = rng.gen_range(0.2..3.0);
        let p = QParams::single(q, u, Complex64::new(0.0, 0.0), Complex64::new(w1, 0.0), Complex64::new(v1, 0.0)).unwrap();
        let closed: Vec<Complex64> = (0..=8).map(|n| h_single_closed(n, &p).unwrap()).collect();
        let mut cutoff_max = 0u64;
        for (n, &cl) in closed.iter().enumerate() {
            let sc = cl.norm().max(1.0);
            let e1 = h_series_oracle(n as u32, &p, 1e-12 * sc).unwrap();
            let e2 = h_series_oracle(n as u32, &p, 1e-15 * sc).unwrap_or_else(|_| e1.clone());
            cutoff_max = cutoff_max.max(e1.truncation[0]);
            let res = (e1.value - cl).norm() / sc;
            if res > worst.0 {
                worst = (res, format!(
                    "draw={draw} n={n} q={q} u={u} w1={w1:.4} v1={v1:.4}\n  closed={cl}\n  oracle(tol1e-12)={} oracle(tol1e-15)={}\n  |oracle12-oracle15|={:.3e} |closed-oracle15|={:.3e} cutoff={}",
                    e1.value, e2.value, (e1.value - e2.value).norm(), (cl - e2.value).norm(), e1.truncation[0]
                ));
            }
        }
        let gf = gf_changhee_coeffs(8, &p, Some(cutoff_max)).unwrap();
        for (n, &cl) in closed.iter().enumerate() {
            let sc = cl.norm().max(1.0);
            let res = (gf[n] - cl).norm() / sc;
            if res > worst.0 {
                worst = (res, format!("draw={draw} GF n={n} q={q} u={u} w1={w1:.4} v1={v1:.4} closed={cl} gf={} cutoff={cutoff_max}", gf[n]));
            }
        }
    }
    println!("worst residual {:.4e}\n{}", worst.0, worst.1);
}
