//! Brute-force oracles shared by the integration suites. Nothing here calls
//! into the library's linear algebra.
#![allow(dead_code)]

use rado_core::lab::coloring::SolutionFilter;
use rado_core::RationalMatrix;

pub fn to_rows(m: &RationalMatrix) -> Vec<Vec<i64>> {
    m.to_i64_rows().expect("small integer matrix")
}

/// Laplace expansion along the first row.
pub fn det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m[0][0];
    }
    let mut total = 0;
    for c in 0..n {
        if m[0][c] == 0 {
            continue;
        }
        let minor: Vec<Vec<i128>> = m[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, &v)| v).collect())
            .collect();
        let sign = if c % 2 == 0 { 1 } else { -1 };
        total += sign * m[0][c] * det(&minor);
    }
    total
}

pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize == k {
            out.push((0..n).filter(|&i| mask >> i & 1 == 1).collect());
        }
    }
    out
}

/// Largest nonvanishing minor among the given columns.
pub fn rank_by_minors(rows: &[Vec<i64>], cols: &[usize]) -> usize {
    let n = rows.len();
    for r in (1..=n.min(cols.len())).rev() {
        for rs in subsets(n, r) {
            for cs in subsets(cols.len(), r) {
                let sub: Vec<Vec<i128>> = rs
                    .iter()
                    .map(|&i| cs.iter().map(|&j| rows[i][cols[j]] as i128).collect())
                    .collect();
                if det(&sub) != 0 {
                    return r;
                }
            }
        }
    }
    0
}

pub fn full_rank(rows: &[Vec<i64>]) -> usize {
    let cols: Vec<usize> = (0..rows.first().map_or(0, Vec::len)).collect();
    rank_by_minors(rows, &cols)
}

/// Rank of a list of integer vectors, stopping once `stop` is reached.
pub fn rank_of_vectors(vs: &[Vec<i128>], stop: usize) -> usize {
    // echelon basis sorted by pivot; each vector vanishes before its pivot
    let mut basis: Vec<(usize, Vec<i128>)> = Vec::new();
    for v in vs {
        if basis.len() >= stop {
            break;
        }
        let mut v = v.clone();
        for (p, b) in &basis {
            if v[*p] != 0 {
                let (bp, vp) = (b[*p], v[*p]);
                for (x, y) in v.iter_mut().zip(b) {
                    *x = *x * bp - vp * y;
                }
                let g = v.iter().fold(0, |g, &x| gcd(g, x));
                if g > 1 {
                    v.iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        if let Some(p) = v.iter().position(|&x| x != 0) {
            let at = basis.iter().position(|(q, _)| *q > p).unwrap_or(basis.len());
            basis.insert(at, (p, v));
        }
    }
    basis.len()
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// `mu(d)`: largest column set of rank at most `d`.
pub fn mu_oracle(rows: &[Vec<i64>], d: usize) -> usize {
    let s = rows[0].len();
    (0..1u32 << s)
        .filter(|mask| {
            let cols: Vec<usize> = (0..s).filter(|&j| mask >> j & 1 == 1).collect();
            rank_by_minors(rows, &cols) <= d
        })
        .map(|m| m.count_ones() as usize)
        .max()
        .unwrap()
}

/// `q(d)`: fewest columns supporting `d` independent row-space vectors.
/// Candidate vectors are `lambda M` with `lambda` in a box; for entries in
/// `{-2..2}` and at most 3 rows, the box `{-8..8}` contains a basis of every
/// subspace `{lambda M : supp in U}` (cross products of two columns).
pub fn q_oracle(rows: &[Vec<i64>], d: usize) -> usize {
    let n = rows.len();
    let s = rows[0].len();
    let mut vecs: Vec<(u32, Vec<i128>)> = Vec::new();
    let mut lam = vec![-8i64; n];
    loop {
        let v: Vec<i128> = (0..s)
            .map(|j| (0..n).map(|i| (lam[i] * rows[i][j]) as i128).sum())
            .collect();
        let mask = (0..s).filter(|&j| v[j] != 0).fold(0u32, |m, j| m | 1 << j);
        if mask != 0 {
            vecs.push((mask, v));
        }
        let mut i = 0;
        loop {
            if i == n {
                break;
            }
            lam[i] += 1;
            if lam[i] <= 8 {
                break;
            }
            lam[i] = -8;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    if d == 0 {
        return 0;
    }
    let mut best = usize::MAX;
    for u in 0..1u32 << s {
        if (u.count_ones() as usize) >= best {
            continue;
        }
        let inside: Vec<Vec<i128>> = vecs.iter().filter(|(m, _)| m & !u == 0).map(|(_, v)| v.clone()).collect();
        if rank_of_vectors(&inside, d) >= d {
            best = u.count_ones() as usize;
        }
    }
    best
}

/// Some assignment of columns to `k` labels leaves every class independent.
pub fn partition_brute(rows: &[Vec<i64>], k: usize) -> bool {
    let s = rows[0].len();
    let total = k.pow(s as u32);
    (0..total).any(|mut code| {
        let mut classes = vec![Vec::new(); k];
        for j in 0..s {
            classes[code % k].push(j);
            code /= k;
        }
        classes.iter().all(|c| rank_by_minors(rows, c) == c.len())
    })
}

fn in_span(rows: &[Vec<i64>], used: &[usize], target: &[i64]) -> bool {
    let mut aug: Vec<Vec<i64>> = rows.to_vec();
    for (r, t) in aug.iter_mut().zip(target) {
        r.push(*t);
    }
    let mut with = used.to_vec();
    with.push(rows[0].len());
    rank_by_minors(&aug, used) == rank_by_minors(&aug, &with)
}

/// Exhaustive backtracking over ordered set partitions.
pub fn columns_condition_brute(rows: &[Vec<i64>]) -> bool {
    fn go(rows: &[Vec<i64>], used: &mut Vec<usize>, rest: &[usize]) -> bool {
        if rest.is_empty() {
            return true;
        }
        for mask in 1u32..(1 << rest.len()) {
            let block: Vec<usize> = (0..rest.len()).filter(|&i| mask >> i & 1 == 1).map(|i| rest[i]).collect();
            let sum: Vec<i64> = rows.iter().map(|r| block.iter().map(|&j| r[j]).sum()).collect();
            let ok = if used.is_empty() { sum.iter().all(|&x| x == 0) } else { in_span(rows, used, &sum) };
            if ok {
                let remaining: Vec<usize> = rest.iter().copied().filter(|c| !block.contains(c)).collect();
                let before = used.len();
                used.extend(&block);
                if go(rows, used, &remaining) {
                    return true;
                }
                used.truncate(before);
            }
        }
        false
    }
    let all: Vec<usize> = (0..rows[0].len()).collect();
    go(rows, &mut Vec::new(), &all)
}

/// Every integer matrix of the given shape with entries in `lo..=hi`.
pub fn all_matrices(rows: usize, cols: usize, lo: i64, hi: i64) -> Vec<Vec<Vec<i64>>> {
    let width = (hi - lo + 1) as u64;
    let cells = rows * cols;
    (0..width.pow(cells as u32))
        .map(|mut code| {
            let mut m = vec![vec![0; cols]; rows];
            for cell in 0..cells {
                m[cell / cols][cell % cols] = lo + (code % width) as i64;
                code /= width;
            }
            m
        })
        .collect()
}

/// Naive count of `x in prod domains` with `M x^k = 0`, split into
/// `(total, pairwise distinct)`.
pub fn naive_count(rows: &[Vec<i64>], k: u32, domains: &[Vec<u64>]) -> (u64, u64) {
    let s = domains.len();
    let mut idx = vec![0usize; s];
    let (mut total, mut distinct) = (0, 0);
    if domains.iter().any(Vec::is_empty) {
        return (0, 0);
    }
    loop {
        let x: Vec<i128> = (0..s).map(|j| domains[j][idx[j]] as i128).collect();
        if rows.iter().all(|r| r.iter().zip(&x).map(|(&a, &v)| a as i128 * v.pow(k)).sum::<i128>() == 0) {
            total += 1;
            let mut y = x.clone();
            y.sort();
            if y.windows(2).all(|w| w[0] != w[1]) {
                distinct += 1;
            }
        }
        let mut i = 0;
        loop {
            if i == s {
                return (total, distinct);
            }
            idx[i] += 1;
            if idx[i] < domains[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

/// Some `r`-coloring of `[N]` avoids monochromatic admitted solutions.
pub fn colorable_brute(rows: &[Vec<i64>], k: u32, n: u64, r: u32, filter: SolutionFilter) -> bool {
    let s = rows[0].len();
    let doms = vec![(1..=n).collect::<Vec<u64>>(); s];
    let mut sols = Vec::new();
    let mut idx = vec![0usize; s];
    'outer: loop {
        let x: Vec<u64> = idx.iter().map(|&i| doms[0][i]).collect();
        let ok = rows
            .iter()
            .all(|row| row.iter().zip(&x).map(|(&a, &v)| a as i128 * (v as i128).pow(k)).sum::<i128>() == 0);
        if ok && filter.admits(&x) {
            sols.push(x);
        }
        for i in 0..s {
            idx[i] += 1;
            if idx[i] < n as usize {
                continue 'outer;
            }
            idx[i] = 0;
        }
        break;
    }
    (0..(r as u64).pow(n as u32)).any(|mut code| {
        let colors: Vec<u64> = (0..n)
            .map(|_| {
                let c = code % r as u64;
                code /= r as u64;
                c
            })
            .collect();
        sols.iter().all(|x| x.iter().any(|&v| colors[(v - 1) as usize] != colors[(x[0] - 1) as usize]))
    })
}
