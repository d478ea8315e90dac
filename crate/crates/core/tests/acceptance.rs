//! Acceptance run: one line per criterion, nonzero exit if any fails.
//!
//! Expected values come from `oracle`, which recomputes them with plain
//! integer arithmetic rather than calling into the library.

mod oracle;

use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use nkcy::cremona::{phi_pullback_closed, phi_pullback_sequence, psi_step, reflect, Root};
use nkcy::curves::{ample_test, build_c, build_l, enumerate_minus_one_classes, minus_one_classes_of_degree};
use nkcy::lattice::{canonical_class, degree, pairing};
use nkcy::smoothing::{
    betti_computation, d_semistability_check, independence_rank, nonprojectivity_kernel, SurfaceModel,
};
use nkcy::snf::{smith_normal_form, IntegerMatrix};
use nkcy::topology::{euler_breakdown, euler_closed_form, gamma};
use nkcy::LatticeVector;

type Check = Result<String, String>;

fn lv(v: &oracle::V) -> LatticeVector {
    LatticeVector::from_slice(&oracle::to_big(v)).unwrap()
}

fn criterion_1() -> Check {
    let h = LatticeVector::h();
    let psi = oracle::triple_form(8, [1, 2, 4]);
    if psi_step(&h) != lv(&psi) {
        return Err(format!("psi^*(h) = {}", psi_step(&h)));
    }
    if psi_step(&h).to_string() != "8;-1,-1,-1,-2,-2,-2,-4,-4,-4" {
        return Err("psi^*(h) text form".into());
    }
    let psi1 = oracle::triple_form(28, [6, 9, 12]);
    if phi_pullback_closed(1) != lv(&psi1) {
        return Err(format!("psi_1^*(h) = {}", phi_pullback_closed(1)));
    }
    let mut oracle_v = oracle::h();
    for (m, iterative) in phi_pullback_sequence(&h).enumerate().take(1001).skip(1) {
        oracle_v = oracle::phi_iter(1, &oracle_v);
        let closed = phi_pullback_closed(m as u64);
        if closed != iterative {
            return Err(format!("m = {m}: closed {closed} != iterative {iterative}"));
        }
        if closed != lv(&oracle_v) {
            return Err(format!("m = {m}: library {closed} != oracle reflections"));
        }
    }
    Ok("m = 1..1000 closed = iterative = oracle; anchors verbatim".into())
}

fn criterion_2() -> Check {
    for m in 1..=1000u64 {
        let l = build_l(m).map_err(|e| e.to_string())?;
        let mi = m as i128;
        let p = oracle::phi_iter_closed(m);
        let mut want = [0i128; 10];
        for i in 0..10 {
            want[i] = oracle::h()[i] + p[i] + mi * oracle::k()[i];
        }
        if l != lv(&want) {
            return Err(format!("m = {m}: L_m = {l}"));
        }
        if l.square() != BigInt::from(54 * mi * mi - 12 * mi + 4) {
            return Err(format!("m = {m}: L_m^2 = {}", l.square()));
        }
        let minus_k = oracle::form(&want, &oracle::k().map(|x| -x));
        if degree(&l) != BigInt::from(6) || minus_k != 6 {
            return Err(format!("m = {m}: L_m.(-K) = {}", degree(&l)));
        }
    }
    Ok("L_m^2 = 54m^2-12m+4, L_m.(-K) = 6 for m = 1..1000".into())
}

fn criterion_3() -> Check {
    for alpha in 0..=3u32 {
        let got = minus_one_classes_of_degree(alpha).len() as u64;
        let want = oracle::count_minus_one(i64::from(alpha));
        if got != want {
            return Err(format!("degree {alpha}: {got} classes, oracle {want}"));
        }
    }
    let counts: Vec<usize> = (0..=2).map(|a| minus_one_classes_of_degree(a).len()).collect();
    if counts != [9, 36, 126] {
        return Err(format!("counts {counts:?}"));
    }
    (1..=12u64).into_par_iter().try_for_each(|m| {
        for (name, v) in [("L", build_l(m)), ("C", build_c(m))] {
            let v = v.map_err(|e| e.to_string())?;
            let cert = ample_test(&v, m as u32, Some(m));
            if !cert.is_certified() || !cert.tail_certified || cert.hypotheses.is_empty() {
                return Err(format!("{name}_{m}: {}", cert.verdict.label()));
            }
        }
        Ok(())
    })?;
    Ok("L_m, C_m ample_certified for m = 1..12; counts 9, 36, 126 (oracle to degree 3)".into())
}

fn criterion_4() -> Check {
    let classes = enumerate_minus_one_classes(20);
    let checked: usize = (1..=20u64)
        .into_par_iter()
        .map(|m| {
            let l = build_l(m).map_err(|e| e.to_string())?;
            let mut n = 0;
            for c in classes.iter().filter(|c| *c.alpha() <= BigInt::from(m)) {
                let bound = (BigInt::from(m) + c.alpha()) * 2;
                if pairing(&l, &c.vector) < bound {
                    return Err(format!("m = {m}: L_m.({}) below 2m + 2alpha", c.vector));
                }
                n += 1;
            }
            Ok(n)
        })
        .collect::<Result<Vec<usize>, String>>()?
        .into_iter()
        .sum();
    Ok(format!("{checked} (m, C) pairs with alpha <= m <= 20"))
}

fn criterion_5() -> Check {
    for m in 1..=1000u64 {
        let d = d_semistability_check(m).map_err(|e| e.to_string())?;
        let p = oracle::phi_iter_closed(m);
        let (h, k) = (oracle::h(), oracle::k());
        let mi = m as i128;
        let mut lhs = [0i128; 10];
        let mut rhs = [0i128; 10];
        for i in 0..10 {
            lhs[i] = 3 * (h[i] + p[i]) - 2 * k[i];
            let c_m = 3 * h[i] + 3 * p[i] + (mi - 2) * k[i];
            rhs[i] = -mi * k[i] + c_m;
        }
        if !d.holds || lhs != rhs || d.normal_bundle_class != lv(&lhs) || d.center_class != lv(&rhs) {
            return Err(format!("m = {m}"));
        }
    }
    Ok("3(h + phi_m^*h) + 2f = mf + c_m for m = 1..1000".into())
}

/// Columns of the restriction map, built from the oracle lattice.
fn oracle_columns(n: u32, m: u64) -> (usize, Vec<Vec<BigInt>>, Vec<BigInt>) {
    let (rho, k_t): (usize, Vec<i128>) = if n == 2 {
        (10, oracle::k().to_vec())
    } else {
        (2, vec![-1, 0])
    };
    let rows = 10 + rho;
    let s_col = |v: &oracle::V, sign: i128| -> Vec<BigInt> {
        let mut c: Vec<BigInt> = v.iter().map(|&x| BigInt::from(sign * x)).collect();
        c.resize(rows, BigInt::from(0));
        c
    };
    let t_col = |g: usize, sign: i64| -> Vec<BigInt> {
        let mut c = vec![BigInt::from(0); rows];
        c[10 + g] = BigInt::from(sign);
        c
    };
    let p = oracle::phi_iter_closed(m);
    let f = oracle::k().map(|x| -x);
    let mut c_m = [0i128; 10];
    for i in 0..10 {
        c_m[i] = 3 * oracle::h()[i] + 3 * p[i] + (m as i128 - 2) * oracle::k()[i];
    }
    let mut cols = vec![s_col(&oracle::h(), 1)];
    cols.extend((0..rho).map(|g| t_col(g, 1)));
    cols.extend((0..m).map(|_| s_col(&f, 1)));
    cols.push(s_col(&c_m, 1));
    cols.push(s_col(&p, -1));
    cols.extend((0..rho).map(|g| t_col(g, -1)));
    let mut rel: Vec<BigInt> = f.iter().map(|&x| BigInt::from(x)).collect();
    rel.extend(k_t.iter().map(|&x| BigInt::from(x)));
    (rho, cols, rel)
}

fn criterion_6() -> Check {
    let grid: Vec<(u32, u64)> = [2u32, 3, 4, 5].iter().flat_map(|&n| (1..=50u64).map(move |m| (n, m))).collect();
    grid.par_iter().try_for_each(|&(n, m)| {
        let model = SurfaceModel::new(n).map_err(|e| e.to_string())?;
        let b = betti_computation(&model, m);
        let (rho, mut cols, rel) = oracle_columns(n, m);
        let generators = cols.len();
        cols.push(rel);
        let oracle_b2_x0 = generators + 1 - oracle::rank(&cols);
        let want = m as usize + rho + 1;
        if b.b2_x0 != want || oracle_b2_x0 != want || b.b2_x != want - 1 {
            return Err(format!(
                "n = {n}, m = {m}: library {} / oracle {oracle_b2_x0} / expected {want}",
                b.b2_x0
            ));
        }
        let theorem = if n == 2 { m + 10 } else { m + 2 };
        if b.b2_x as u64 != theorem {
            return Err(format!("n = {n}, m = {m}: b2(X) = {}", b.b2_x));
        }
        Ok(())
    })?;
    Ok("b2(X0) = m + rho_T + 1 (SNF and oracle rank), b2(X) = m+10 / m+2, n = 2..5, m = 1..50".into())
}

fn criterion_7() -> Check {
    for m in 1..=100u64 {
        let e = euler_breakdown(2, m).map_err(|e| e.to_string())?;
        if e.e_x != BigInt::from(288) {
            return Err(format!("n = 2, m = {m}: e = {}", e.e_x));
        }
        let g = gamma(m).map_err(|e| e.to_string())?;
        let c = build_c(m).map_err(|e| e.to_string())?;
        let lattice_adj = -pairing(&(&canonical_class() + &c), &c);
        if g != oracle::adjunction_euler(m) || g != lattice_adj {
            return Err(format!("m = {m}: gamma {g}, adjunction {lattice_adj}"));
        }
    }
    for n in 1..=10u32 {
        for m in 1..=100u64 {
            let e = euler_breakdown(n, m).map_err(|e| e.to_string())?;
            let o = oracle::euler_strata(n, m);
            let mv = &o.e_x1 + &o.e_x2 - &o.e_x12 * 2;
            let closed = euler_closed_form(n, m).map_err(|e| e.to_string())?;
            if mv != closed || e.e_x != mv || e.e_x1 != o.e_x1 || e.e_cm != o.e_cm {
                return Err(format!("n = {n}, m = {m}: oracle {mv}, library {}, closed {closed}", e.e_x));
            }
        }
    }
    for n in 1..=10u32 {
        let e = euler_closed_form(n, 100).map_err(|e| e.to_string())?;
        let zero = BigInt::from(0);
        let ok = match n {
            2 => e == BigInt::from(288),
            n if n % 2 == 1 => e < zero,
            _ => e > zero,
        };
        if !ok {
            return Err(format!("sign law at n = {n}, m = 100: {e}"));
        }
    }
    Ok("e = 288 (n = 2); gamma = adjunction; MV = closed form on 10 x 100; sign law at m = 100".into())
}

fn criterion_8() -> Check {
    let zero = BigInt::from(0);
    for m in 1..=100u64 {
        if independence_rank(m) != 3 {
            return Err(format!("m = {m}: rank {}", independence_rank(m)));
        }
        let p = oracle::phi_iter_closed(m);
        let rows = vec![oracle::to_big(&oracle::h()), oracle::to_big(&p), oracle::to_big(&oracle::k())];
        if oracle::rank(&rows) != 3 {
            return Err(format!("m = {m}: oracle rank"));
        }
        let r = nonprojectivity_kernel(m, &zero, &zero, &zero).map_err(|e| e.to_string())?;
        match r.forced {
            Some((a, a_prime)) if a.0 == zero && a_prime.0 == zero => {}
            other => return Err(format!("m = {m}: forced {other:?}")),
        }
    }
    Ok("forced (a, a') = (0, 0) and rank{h, phi^*h, k} = 3 for m = 1..100".into())
}

fn random_vector(rng: &mut ChaCha8Rng) -> oracle::V {
    let mut v = [0i128; 10];
    for x in v.iter_mut() {
        *x = rng.gen_range(-1000..=1000);
    }
    v
}

fn criterion_9() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0009);
    let roots = Root::all();
    let k = canonical_class();
    for trial in 0..10_000 {
        let (x, y) = (random_vector(&mut rng), random_vector(&mut rng));
        let r = &roots[rng.gen_range(0..roots.len())];
        let (lx, ly) = (lv(&x), lv(&y));
        let rx = reflect(&lx, r);
        let ry = reflect(&ly, r);
        if rx != lv(&oracle::reflect(&x, r.indices())) {
            return Err(format!("trial {trial}: reflection disagrees with oracle"));
        }
        if reflect(&rx, r) != lx || pairing(&rx, &ry) != pairing(&lx, &ly) || reflect(&k, r) != k {
            return Err(format!("trial {trial}: involution/isometry/k-fixing"));
        }
    }
    for trial in 0..1_000 {
        let rows = rng.gen_range(1..=5);
        let cols = rng.gen_range(1..=5);
        let data: Vec<Vec<BigInt>> = (0..rows)
            .map(|_| (0..cols).map(|_| BigInt::from(rng.gen_range(-9i64..=9))).collect())
            .collect();
        let m = IntegerMatrix::from_rows(&data).map_err(|e| e.to_string())?;
        let s = smith_normal_form(&m);
        let (u, v, d) = (s.u.to_rows(), s.v.to_rows(), s.d.to_rows());
        let one = BigInt::from(1);
        if oracle::matmul(&oracle::matmul(&u, &data), &v) != d {
            return Err(format!("trial {trial}: U M V != D"));
        }
        if num_traits::Signed::abs(&oracle::det(&u)) != one || num_traits::Signed::abs(&oracle::det(&v)) != one {
            return Err(format!("trial {trial}: U or V not unimodular"));
        }
        for i in 0..rows {
            for j in 0..cols {
                if i != j && d[i][j] != BigInt::from(0) {
                    return Err(format!("trial {trial}: D not diagonal"));
                }
            }
        }
        let diag: Vec<&BigInt> = (0..rows.min(cols)).map(|i| &d[i][i]).collect();
        let nonzero: Vec<&BigInt> = diag.iter().copied().filter(|x| **x != BigInt::from(0)).collect();
        if nonzero.len() != oracle::rank(&data) || nonzero.iter().any(|x| **x < BigInt::from(0)) {
            return Err(format!("trial {trial}: rank or sign of D"));
        }
        if nonzero.windows(2).any(|w| num_integer::Integer::mod_floor(w[1], w[0]) != BigInt::from(0)) {
            return Err(format!("trial {trial}: divisibility chain"));
        }
    }
    Ok("10^4 reflection pairs, 10^3 SNF factorisations".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("closed-form pullback", criterion_1),
        ("L_m identities", criterion_2),
        ("ampleness certificates", criterion_3),
        ("proof bound", criterion_4),
        ("d-semistability", criterion_5),
        ("Betti numbers", criterion_6),
        ("Euler numbers", criterion_7),
        ("forced vanishing", criterion_8),
        ("property suites", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = f();
        let ms = start.elapsed().as_millis();
        match result {
            Ok(detail) => println!("criterion {} PASS  {name}: {detail} ({ms} ms)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} FAIL  {name}: {why} ({ms} ms)", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
