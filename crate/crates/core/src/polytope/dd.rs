//! Incremental double description for full-dimensional integer point sets.
//!
//! The facets of `conv(P)` are the extreme rays of the cone
//! `{ y in Z^{d+1} : y0 + <y', p> >= 0 for all p in P }`.

use num_integer::Integer;

use crate::linalg;

/// Inequality `offset + <normal, x> >= 0`, tight on the listed point indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Halfspace {
    pub normal: Vec<i64>,
    pub offset: i64,
    pub tight: Vec<usize>,
}

#[derive(Clone, Debug)]
struct Ray {
    y: Vec<i128>,
    zeros: BitSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct BitSet(Vec<u64>);

impl BitSet {
    pub fn new(n: usize) -> Self {
        BitSet(vec![0; n.div_ceil(64).max(1)])
    }
    pub fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    pub fn contains(&self, i: usize) -> bool {
        self.0[i / 64] & (1 << (i % 64)) != 0
    }
    pub fn and(&self, o: &Self) -> Self {
        BitSet(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }
    pub fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
    pub fn is_superset(&self, o: &Self) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a & b == *b)
    }
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &bits)| {
            (0..64)
                .filter(move |b| bits & (1 << b) != 0)
                .map(move |b| w * 64 + b)
        })
    }
}

fn reduce(y: &mut [i128]) {
    let g = y.iter().fold(0i128, |g, &x| g.gcd(&x));
    if g > 1 {
        y.iter_mut().for_each(|x| *x /= g);
    }
}

fn eval(y: &[i128], p: &[i64]) -> i128 {
    y[0] + y[1..]
        .iter()
        .zip(p)
        .map(|(a, &b)| a * b as i128)
        .sum::<i128>()
}

/// Facets of the hull of `points`, which must affinely span `R^d` with `d >= 1`.
pub fn facets(points: &[Vec<i64>], d: usize) -> Vec<Halfspace> {
    let n = points.len();
    let homog = |p: &Vec<i64>| -> Vec<i64> {
        let mut h = Vec::with_capacity(d + 1);
        h.push(1);
        h.extend_from_slice(p);
        h
    };

    // Greedy affinely independent seed.
    let mut seed: Vec<usize> = Vec::with_capacity(d + 1);
    let mut seed_rows: Vec<Vec<i64>> = Vec::new();
    for (i, p) in points.iter().enumerate() {
        let mut trial = seed_rows.clone();
        trial.push(homog(p));
        if linalg::rank(&trial) == trial.len() {
            seed.push(i);
            seed_rows = trial;
            if seed.len() == d + 1 {
                break;
            }
        }
    }
    assert_eq!(seed.len(), d + 1, "point set is not full dimensional");

    // Initial rays: columns of adj(B) oriented so that B * ray >= 0.
    let det = linalg::det(&seed_rows);
    let sgn = det.signum();
    let mut rays: Vec<Ray> = Vec::with_capacity(d + 1);
    for j in 0..=d {
        let mut y = vec![0i128; d + 1];
        for (i, yi) in y.iter_mut().enumerate() {
            let minor: Vec<Vec<i64>> = seed_rows
                .iter()
                .enumerate()
                .filter(|&(r, _)| r != j)
                .map(|(_, row)| {
                    row.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != i)
                        .map(|(_, &x)| x)
                        .collect()
                })
                .collect();
            let cof = linalg::det(&minor);
            *yi = if (i + j) % 2 == 0 { cof } else { -cof } * sgn;
        }
        reduce(&mut y);
        let mut zeros = BitSet::new(n);
        for (k, &s) in seed.iter().enumerate() {
            if k != j {
                zeros.insert(s);
            }
        }
        rays.push(Ray { y, zeros });
    }

    let in_seed = {
        let mut b = BitSet::new(n);
        seed.iter().for_each(|&i| b.insert(i));
        b
    };
    for (idx, p) in points.iter().enumerate() {
        if in_seed.contains(idx) {
            continue;
        }
        let vals: Vec<i128> = rays.iter().map(|r| eval(&r.y, p)).collect();
        if vals.iter().all(|&v| v >= 0) {
            for (r, &v) in rays.iter_mut().zip(&vals) {
                if v == 0 {
                    r.zeros.insert(idx);
                }
            }
            continue;
        }
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| vals[k] > 0).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| vals[k] < 0).collect();
        let mut fresh: Vec<Ray> = Vec::new();
        for &a in &pos {
            for &b in &neg {
                let common = rays[a].zeros.and(&rays[b].zeros);
                if common.count() + 1 < d {
                    continue;
                }
                let blocked = rays
                    .iter()
                    .enumerate()
                    .any(|(k, r)| k != a && k != b && r.zeros.is_superset(&common));
                if blocked {
                    continue;
                }
                let (va, vb) = (vals[a], vals[b]);
                let mut y: Vec<i128> = rays[a]
                    .y
                    .iter()
                    .zip(&rays[b].y)
                    .map(|(&ya, &yb)| va * yb - vb * ya)
                    .collect();
                reduce(&mut y);
                let mut zeros = common;
                zeros.insert(idx);
                fresh.push(Ray { y, zeros });
            }
        }
        let mut kept: Vec<Ray> = Vec::with_capacity(rays.len() + fresh.len());
        for (mut r, &v) in rays.into_iter().zip(&vals) {
            if v > 0 {
                kept.push(r);
            } else if v == 0 {
                r.zeros.insert(idx);
                kept.push(r);
            }
        }
        kept.extend(fresh);
        rays = kept;
    }

    rays.into_iter()
        .map(|r| Halfspace {
            offset: i64::try_from(r.y[0]).expect("facet offset overflow"),
            normal: r.y[1..]
                .iter()
                .map(|&x| i64::try_from(x).expect("facet normal overflow"))
                .collect(),
            tight: r.zeros.iter().filter(|&i| i < n).collect(),
        })
        .collect()
}
