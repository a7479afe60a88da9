// Ground-truth comparison: enumerate tie-arrangement vertices.
use lorentz_seq::approx::*;
use lorentz_seq::fixtures;
use lorentz_seq::weights::Space;
use rand::Rng;

fn ground_truth(v: &[f64], x: &[f64], basis: &[Vec<f64>]) -> f64 {
    let n = x.len();
    let dim = basis.len();
    let f = |c: &[f64]| {
        let z: Vec<f64> = (0..n)
            .map(|i| {
                let mut t = x[i];
                for (j, b) in basis.iter().enumerate() {
                    t -= c[j] * b[i];
                }
                t
            })
            .collect();
        d1v_norm_f64(v, &z)
    };
    // Hyperplanes a.c = b: z_i - s z_j = 0 and z_i = 0.
    let mut planes: Vec<(Vec<f64>, f64)> = Vec::new();
    for i in 0..n {
        let ai: Vec<f64> = basis.iter().map(|b| b[i]).collect();
        planes.push((ai.clone(), x[i]));
        for j in (i + 1)..n {
            for s in [1.0f64, -1.0] {
                let a: Vec<f64> = basis.iter().map(|b| b[i] - s * b[j]).collect();
                let bb = x[i] - s * x[j];
                planes.push((a, bb));
            }
        }
    }
    let mut best = f(&vec![0.0; dim]);
    // All dim-subsets; solve the small linear system.
    let m = planes.len();
    let mut idx = vec![0usize; dim];
    fn rec(
        planes: &[(Vec<f64>, f64)],
        m: usize,
        dim: usize,
        k: usize,
        from: usize,
        idx: &mut Vec<usize>,
        best: &mut f64,
        f: &dyn Fn(&[f64]) -> f64,
    ) {
        if k == dim {
            // Solve
            let mut a: Vec<Vec<f64>> = idx.iter().map(|&i| planes[i].0.clone()).collect();
            let mut b: Vec<f64> = idx.iter().map(|&i| planes[i].1).collect();
            let nn = dim;
            for col in 0..nn {
                let piv = (col..nn).max_by(|&p, &q| a[p][col].abs().partial_cmp(&a[q][col].abs()).unwrap()).unwrap();
                if a[piv][col].abs() < 1e-9 { return; }
                a.swap(col, piv); b.swap(col, piv);
                let pv = a[col][col];
                for r in 0..nn {
                    if r != col {
                        let fct = a[r][col] / pv;
                        for cc in col..nn { a[r][cc] -= fct * a[col][cc]; }
                        b[r] -= fct * b[col];
                    }
                }
            }
            let c: Vec<f64> = (0..nn).map(|i| b[i] / a[i][i]).collect();
            let val = f(&c);
            if val < *best { *best = val; }
            return;
        }
        for i in from..m {
            idx[k] = i;
            rec(planes, m, dim, k + 1, i + 1, idx, best, f);
        }
    }
    rec(&planes, m, dim, 0, 0, &mut idx, &mut best, &f);
    best
}

fn main() {
    let s = Space::new(fixtures::w_a());
    let mut bad = 0;
    for t in 0..203u64 {
        let mut rng = fixtures::rng(7 ^ 0x9107, t);
        let n = rng.gen_range(4..=10usize);
        let dim = rng.gen_range(1..=3usize);
        let basis: Vec<Vec<f64>> = (0..dim)
            .map(|_| (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect())
            .collect();
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
        if metric_projection(&s, &x, &basis, 1e-9).is_err() { continue; }
        let v = s.v_table_f64(n as u64).unwrap();
        let gt = ground_truth(&v, &x, &basis);
        let res = metric_projection(&s, &x, &basis, 1e-9).unwrap();
        let oracle = projection_search_oracle(&s, &x, &basis, 2000, t).unwrap();
        let gs = res.distance.value() - gt;
        let go = oracle - gt;
        if gs.abs() > 5e-7 || go.abs() > 5e-7 {
            bad += 1;
            println!("t={t} n={n} dim={dim} solver-gt={gs:.3e} oracle-gt={go:.3e}");
        }
    }
    println!("instances off ground truth: {bad}");
}
