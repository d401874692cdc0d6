//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use rado_core::counting::{count_mixed_degree, count_solutions, even_moment_check, mean_value, DiagonalSystem};
use rado_core::lab::bohr::{bohr_set, bohr_syndetic_constant, BohrSpec};
use rado_core::lab::coloring::{coloring_is_valid, find_bad_coloring, SolutionFilter};
use rado_core::lab::psi::{indicator, von_neumann_sides, AuxOperator, AuxOperatorSpec, Weight};
use rado_core::lab::syndetic::{check_mult_syndetic, syndetic_density_check, SyndeticFamily};
use rado_core::lab::wtrick::{crude_transfer_check, is_smooth, kw_root, w_of, w_params, TransferInstance};
use rado_core::linalg::{ratio, Rational};
use rado_core::matroid::{aigner_criterion, check_condition_i, is_k_partitionable, q_profile};
use rado_core::structure::{assemble_blocks, check_columns_condition, to_normal_form};
use rado_core::{Error, RationalMatrix};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn within(elapsed: Duration, limit_secs: u64) -> bool {
    elapsed <= Duration::from_secs(limit_secs)
}

fn fermat() -> Outcome {
    let start = Instant::now();
    let m = RationalMatrix::from_rows(&[[1, -2, 1, 0], [1, -1, 0, 1]]);
    let cert = match check_columns_condition(&m) {
        Ok(Some(c)) => c,
        other => return outcome(false, format!("columns condition: {other:?}")),
    };
    let j1_ok = cert.blocks[0] == vec![0, 1, 2] && cert.validate(&m);
    let ci = check_condition_i(&m, 2).unwrap();
    let first = ci.failures.first().map(|f| (f.d, f.q, f.threshold));
    let ci_ok = !ci.holds && first == Some((1, 3, 5));
    let sys = DiagonalSystem::from_rows(&[[1, -2, 1, 0], [1, -1, 0, 1]], 2);
    let c = count_solutions(&sys, 200, None).unwrap();
    let count_ok = c.counts.nontrivial.is_zero();
    let t = start.elapsed();
    outcome(
        j1_ok && ci_ok && count_ok && within(t, 60),
        format!(
            "J1={:?} first condition (I) failure {:?} nontrivial over [200]^4 = {} total = {} ({:.1?})",
            cert.blocks[0], first, c.counts.nontrivial, c.counts.total, t
        ),
    )
}

fn aigner_exhaustive() -> Outcome {
    let start = Instant::now();
    let disagreements: usize = (0..3usize.pow(8))
        .into_par_iter()
        .filter(|&code| {
            let mut c = code;
            let entries: Vec<i64> = (0..8)
                .map(|_| {
                    let v = (c % 3) as i64 - 1;
                    c /= 3;
                    v
                })
                .collect();
            let rows = vec![entries[..4].to_vec(), entries[4..].to_vec()];
            let m = RationalMatrix::from_rows(&rows);
            let brute = common::partition_brute(&rows, 2);
            let aigner = aigner_criterion(&m, 2).unwrap();
            let cert = is_k_partitionable(&m, 2).unwrap();
            let cert_ok = cert.as_ref().is_none_or(|c| c.validate(&m));
            brute != aigner || cert.is_some() != brute || !cert_ok
        })
        .count();
    let t = start.elapsed();
    outcome(
        disagreements == 0 && within(t, 300),
        format!("3^8 matrices, {disagreements} disagreements ({t:.1?})"),
    )
}

fn q_formula() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9f);
    let (mut tested, mut bad) = (0, 0);
    while tested < 600 {
        let r = rng.gen_range(1..=3);
        let c = rng.gen_range(r..=6);
        let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-2..=2)).collect()).collect();
        if common::full_rank(&rows) != r {
            continue;
        }
        tested += 1;
        let q = q_profile(&RationalMatrix::from_rows(&rows)).unwrap().values;
        if q.iter().enumerate().any(|(d, &v)| v != common::q_oracle(&rows, d)) {
            bad += 1;
        }
    }
    outcome(bad == 0, format!("{tested} full-rank matrices, {bad} disagreements"))
}

fn columns_iff_normal_form() -> Outcome {
    let start = Instant::now();
    let results: Vec<bool> = (0..5usize.pow(8))
        .into_par_iter()
        .filter_map(|code| {
            let mut c = code;
            let entries: Vec<i64> = (0..8)
                .map(|_| {
                    let v = (c % 5) as i64 - 2;
                    c /= 5;
                    v
                })
                .collect();
            let rows = vec![entries[..4].to_vec(), entries[4..].to_vec()];
            if common::full_rank(&rows) != 2 {
                return None;
            }
            let m = RationalMatrix::from_rows(&rows);
            let cc = check_columns_condition(&m).unwrap();
            let agree_and_replay = match (cc, to_normal_form(&m)) {
                (Some(cert), Ok(nf)) => cert.validate(&m) && nf.replays(&m),
                (None, Err(Error::ColumnsConditionFails)) => true,
                _ => false,
            };
            Some(agree_and_replay)
        })
        .collect();
    let bad = results.iter().filter(|ok| !**ok).count();
    outcome(
        bad == 0,
        format!("{} full-rank 2x4 matrices, {bad} disagreements or failed replays ({:.1?})", results.len(), start.elapsed()),
    )
}

fn schur() -> Outcome {
    let start = Instant::now();
    let sys = DiagonalSystem::from_rows(&[[1, 1, -1]], 1);
    let row = vec![vec![1, 1, -1]];
    let at4 = find_bad_coloring(&sys, 4, 2).unwrap();
    let at5 = find_bad_coloring(&sys, 5, 2).unwrap();
    let valid4 = at4
        .as_ref()
        .is_some_and(|c| coloring_is_valid(&sys, c, SolutionFilter::NonConstant).unwrap());
    let brute4 = common::colorable_brute(&row, 1, 4, 2, SolutionFilter::NonConstant);
    let brute5 = common::colorable_brute(&row, 1, 5, 2, SolutionFilter::NonConstant);
    let t = start.elapsed();
    outcome(
        valid4 && brute4 && at5.is_none() && !brute5 && within(t, 10),
        format!(
            "N=4 coloring {:?}, N=5 {}; exhaustive 2^N: N=4 {}, N=5 {} ({t:.1?})",
            at4.map(|c| c.classes()),
            if at5.is_none() { "exhausted" } else { "colored" },
            brute4,
            brute5
        ),
    )
}

fn moments() -> Outcome {
    let start = Instant::now();
    let mut exact = true;
    for k in 1..=3 {
        for t in 1..=2 {
            for n in 1..=6 {
                exact &= even_moment_check(k, t, n).unwrap().equal;
            }
        }
    }
    let value = |n: u64| mean_value(3, 4, n).unwrap().value.to_f64().unwrap();
    let (v32, v64, v128) = (value(32), value(64), value(128));
    let ratios = [v64 / v32, v128 / v64];
    let window = ratios.iter().all(|r| (20.0..=44.0).contains(r));
    let t = start.elapsed();
    outcome(
        exact && window && within(t, 600),
        format!("moment identities exact: {exact}; N(3,4,2N)/N(3,4,N) at N=32,64: {:.2}, {:.2} ({t:.1?})", ratios[0], ratios[1]),
    )
}

fn trivial_sparsity() -> Outcome {
    let sys = DiagonalSystem::from_rows(&[[1, 1, 1, 1, -4]], 2);
    let fracs: Vec<f64> = [20u64, 40, 80]
        .iter()
        .map(|&n| {
            let c = count_solutions(&sys, n, None).unwrap().counts;
            c.trivial.to_f64().unwrap() / c.total.to_f64().unwrap()
        })
        .collect();
    let decreasing = fracs.windows(2).all(|w| w[1] < w[0]);
    outcome(decreasing, format!("trivial/total at N=20,40,80: {:.4} {:.4} {:.4}", fracs[0], fracs[1], fracs[2]))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn random_subset(rng: &mut ChaCha8Rng, n: u64, density: f64) -> Vec<u64> {
    (1..=n).filter(|_| rng.gen_bool(density)).collect()
}

fn transfer() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x51);
    let a_pool: [&[i64]; 5] = [&[1, 1, -2], &[1, 2, -3], &[1, -1, 1, -1], &[2, 1, -3], &[1, 1, 1, -3]];
    let (mut ran, mut failed, mut nonempty) = (0, 0, 0);
    let mut run = |inst: TransferInstance, k: u32, w: u64, n: u64, rng: &mut ChaCha8Rng| -> Result<(), Error> {
        let big_w = w_of(k, w).to_u64().unwrap();
        let xis: Vec<u64> = (1..=big_w).filter(|&x| gcd(x, big_w) == 1).collect();
        let xi = *xis.choose(rng).unwrap();
        let zetas: Vec<u64> = (1..=4).filter(|&z| is_smooth(z, w)).collect();
        let zeta = *zetas.choose(rng).unwrap();
        let p = w_params(k, w, n, zeta, xi)?;
        let r = crude_transfer_check(&inst, &p, 1 << 22)?;
        ran += 1;
        if !(r.pass && r.injective && r.lhs <= r.rhs) {
            failed += 1;
        }
        if !r.lhs.is_zero() {
            nonempty += 1;
        }
        Ok(())
    };
    for w in 1..=3u64 {
        let n = 40;
        let baseline = TransferInstance {
            a: RationalMatrix::from_rows(&[[1, 1, -2]]),
            b: RationalMatrix::zeros(1, 0),
            c: RationalMatrix::zeros(0, 0),
            a_set: (1..=n).collect(),
            s_set: (1..=n * 3).collect(),
        };
        if let Err(e) = run(baseline, 2, w, n, &mut rng) {
            return outcome(false, format!("baseline w={w}: {e}"));
        }
    }
    for i in 0..60 {
        let w = 1 + i % 3;
        let n = rng.gen_range(12..=40);
        let row = a_pool.choose(&mut rng).unwrap().to_vec();
        let lcm = row.iter().fold(1i64, |l, &x| l * x.abs() / gcd(l as u64, x.unsigned_abs()) as i64);
        let t = rng.gen_range(0..=1);
        let b: Vec<Vec<i64>> = vec![(0..t).map(|_| lcm * rng.gen_range(-2..=2)).collect()];
        let (da, ds) = (rng.gen_range(0.5..=1.0), rng.gen_range(0.5..=1.0));
        let inst = TransferInstance {
            a: RationalMatrix::from_rows(&[row]),
            b: RationalMatrix::from_rows_with_cols(&b, t).unwrap(),
            c: RationalMatrix::zeros(0, t),
            a_set: random_subset(&mut rng, n, da),
            s_set: random_subset(&mut rng, n, ds),
        };
        if let Err(e) = run(inst, 2, w, n, &mut rng) {
            return outcome(false, format!("instance {i}: {e}"));
        }
    }
    let roots_ok = (1..=6u32).all(|k| (1..=13u64).all(|w| num_traits::pow(kw_root(k, w), k as usize) == BigUint::from(k) * w_of(k, w)));
    outcome(
        failed == 0 && ran >= 50 && roots_ok,
        format!("{ran} instances ({nonempty} with solutions), {failed} failures; (kW)^(1/k) integral for k<=6, w<=13: {roots_ok}"),
    )
}

fn bohr_syndetic() -> Outcome {
    let spec = BohrSpec::new(1, vec![ratio(1, 3)], ratio(1, 10)).unwrap();
    let set = bohr_set(&spec, 12);
    let set_ok = set == vec![3, 6, 9, 12];

    let n = 10_000u64;
    let families = [
        SyndeticFamily::MultiplesOf { m: 2 },
        SyndeticFamily::MultiplesOf { m: 7 },
        SyndeticFamily::GeometricBlocks { m: 2, c: 0 },
        SyndeticFamily::GeometricBlocks { m: 3, c: 1 },
        SyndeticFamily::OmegaResidue { m: 2, c: 0 },
        SyndeticFamily::OmegaResidue { m: 3, c: 2 },
        SyndeticFamily::GreedyRandom { m: 3, seed: 1 },
        SyndeticFamily::GreedyRandom { m: 5, seed: 2 },
    ];
    let mut family_failures = Vec::new();
    for f in &families {
        let m = f.constant();
        let members = f.members(n * m);
        let contains = |x: u64| members[x as usize];
        let synd = check_mult_syndetic(contains, m, n).syndetic();
        let dens = syndetic_density_check(contains, m, n).pass;
        if !(synd && dens) {
            family_failures.push(format!("{f:?}"));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0xb0);
    let cap = 1000;
    let mut worst = 0;
    let mut over = 0;
    for _ in 0..100 {
        let q = rng.gen_range(1..=500);
        let spec = BohrSpec::new(1, vec![ratio(rng.gen_range(0..q), q)], ratio(1, 10)).unwrap();
        match bohr_syndetic_constant(&spec, cap) {
            Ok(m0) => worst = worst.max(m0),
            Err(_) => over += 1,
        }
    }
    outcome(
        set_ok && family_failures.is_empty() && over == 0,
        format!(
            "B_1(1/3, 1/10) cap [12] = {set:?}; {} families, failures {family_failures:?}; max M0 over 100 phases = {worst} (bound {cap})",
            families.len()
        ),
    )
}

struct PsiCase {
    a: Vec<Vec<i64>>,
    b: Vec<Vec<i64>>,
    c: Vec<Vec<i64>>,
}

fn psi_cases() -> Vec<PsiCase> {
    vec![
        PsiCase { a: vec![vec![1, 1, -2]], b: vec![vec![]], c: vec![] },
        PsiCase { a: vec![vec![1, 1, 1, -3]], b: vec![vec![]], c: vec![] },
        PsiCase { a: vec![vec![1, -1]], b: vec![vec![2]], c: vec![] },
        PsiCase { a: vec![vec![1, 1, -2]], b: vec![vec![1]], c: vec![] },
        PsiCase { a: vec![vec![1, 0, -1, 0], vec![0, 1, 0, -1]], b: vec![vec![1], vec![-1]], c: vec![] },
        PsiCase { a: vec![vec![1, 1, -2]], b: vec![vec![1, -1]], c: vec![vec![1, -1]] },
    ]
}

fn spec_for(case: &PsiCase, b_set: Vec<i64>, y: Vec<i64>) -> AuxOperatorSpec {
    let t = case.b[0].len();
    AuxOperatorSpec {
        a: RationalMatrix::from_rows(&case.a),
        b: RationalMatrix::from_rows_with_cols(&case.b, t).unwrap(),
        k: 2,
        b_set,
        y,
    }
}

fn random_b_set(rng: &mut ChaCha8Rng) -> Vec<i64> {
    let mut all: Vec<i64> = (-2..=2).collect();
    all.shuffle(rng);
    all.truncate(rng.gen_range(1..=3));
    all.sort();
    all
}

fn random_weight(rng: &mut ChaCha8Rng, n: u64) -> Weight {
    (1..=n as i64).map(|x| (x, ratio(rng.gen_range(0..=10), 10))).collect()
}

/// All `y` in `S^t` with `C y^k = 0`.
fn admissible_ys(c: &[Vec<i64>], t: usize, s: &[u64], k: u32) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut idx = vec![0usize; t];
    if t > 0 && s.is_empty() {
        return out;
    }
    loop {
        let y: Vec<i64> = idx.iter().map(|&i| s[i] as i64).collect();
        if c.iter().all(|row| row.iter().zip(&y).map(|(&a, &v)| a * v.pow(k)).sum::<i64>() == 0) {
            out.push(y);
        }
        let mut i = 0;
        loop {
            if i == t {
                return out;
            }
            idx[i] += 1;
            if idx[i] < s.len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

fn psi_bounds() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x75);
    let cases = psi_cases();
    let mut vn_fail = 0;
    for _ in 0..200 {
        let case = cases.choose(&mut rng).unwrap();
        let t = case.b[0].len();
        let y: Vec<i64> = (0..t).map(|_| rng.gen_range(1..=3)).collect();
        let op = AuxOperator::new(spec_for(case, random_b_set(&mut rng), y)).unwrap();
        let n = rng.gen_range(4..=12);
        let (f, g) = (random_weight(&mut rng, n), random_weight(&mut rng, n));
        let (lhs, rhs) = von_neumann_sides(&op, &f, &g, n).unwrap();
        if lhs > rhs {
            vn_fail += 1;
        }
    }

    let mut lb_fail = 0;
    let mut checked = 0;
    let (mut psi_total, mut lambda_total) = (Rational::zero(), BigUint::zero());
    for n in 1..=20u64 {
        for case in &cases {
            let s = case.a[0].len();
            let t = case.b[0].len();
            let supports: Vec<Vec<u64>> = (0..s).map(|_| random_subset(&mut rng, n, 0.7)).collect();
            let s_set = random_subset(&mut rng, n, 0.7);
            let b_set = random_b_set(&mut rng);
            let weights: Vec<Weight> = supports.iter().map(|d| indicator(d.iter().map(|&x| x as i64))).collect();

            let mut sum_psi = Rational::zero();
            for y in admissible_ys(&case.c, t, &s_set, 2) {
                let op = AuxOperator::new(spec_for(case, b_set.clone(), y)).unwrap();
                sum_psi += op.psi(&weights).unwrap();
            }

            let a = RationalMatrix::from_rows(&case.a);
            let neg_b: Vec<Vec<i64>> = case.b.iter().map(|r| r.iter().map(|v| -v).collect()).collect();
            let system = assemble_blocks(
                &a,
                &RationalMatrix::from_rows_with_cols(&neg_b, t).unwrap(),
                &RationalMatrix::from_rows_with_cols(&case.c, t).unwrap(),
            );
            let degrees: Vec<u32> = (0..s).map(|_| 1).chain((0..t).map(|_| 2)).collect();
            let domains: Vec<Vec<u64>> = supports.iter().cloned().chain((0..t).map(|_| s_set.clone())).collect();
            let lambda = count_mixed_degree(&system, &degrees, &domains).unwrap();
            if Rational::from_integer(BigInt::from(lambda.clone())) < sum_psi {
                lb_fail += 1;
            }
            psi_total += sum_psi;
            lambda_total += lambda;
            checked += 1;
        }
    }
    outcome(
        vn_fail == 0 && lb_fail == 0,
        format!("von Neumann bound: 200 instances, {vn_fail} violations; Lambda_1 >= sum Psi: {checked} cases at N<=20, {lb_fail} violations (totals {lambda_total} >= {psi_total})"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("Fermat certificate chain", fermat),
        ("Aigner equivalence, exhaustive", aigner_exhaustive),
        ("q formula vs support oracle", q_formula),
        ("columns condition iff normal form", columns_iff_normal_form),
        ("Schur threshold", schur),
        ("moment identities and N(3,4,N) growth", moments),
        ("trivial-solution sparsity", trivial_sparsity),
        ("W-trick crude transfer", transfer),
        ("Bohr and syndetic suite", bohr_syndetic),
        ("Psi bounds", psi_bounds),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        if !o.pass {
            failures += 1;
        }
        println!("criterion {}: {} {name}: {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}
