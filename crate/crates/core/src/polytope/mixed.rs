//! Mixed volumes in the inclusion–exclusion normalization
//! `MV(P_1..P_d) = sum_{S nonempty} (-1)^{d-|S|} Vol(sum_{i in S} P_i)`,
//! which equals `d!` times the classical mixed volume.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::Polytope;
use crate::error::{Error, Result};
use crate::rational::{binomial, Q};

/// Mixed volume of exactly `d` polytopes in a `d`-dimensional (coordinate) space.
///
/// Identical arguments are grouped, so `d` copies of one polytope cost `d`
/// volume evaluations instead of `2^d - 1`.
pub fn mixed_volume_ie(polys: &[Polytope], d: usize) -> Result<Q> {
    if polys.len() != d {
        return Err(Error::ArgumentCount {
            expected: d,
            got: polys.len(),
        });
    }
    let mut distinct: Vec<Polytope> = Vec::new();
    let mut mult: Vec<usize> = Vec::new();
    for p in polys {
        match distinct.iter().position(|q| q == p) {
            Some(i) => mult[i] += 1,
            None => {
                distinct.push(p.clone());
                mult.push(1);
            }
        }
    }
    let mut engine = MinkowskiVolumes::new(distinct, d)?;
    engine.mixed_volume(&mult)
}

/// Caches `Vol(c_1 P_1 + ... + c_r P_r)` over integer weight vectors for a fixed family.
pub struct MinkowskiVolumes {
    base: Vec<Polytope>,
    d: usize,
    cache: HashMap<Vec<usize>, Q>,
}

impl MinkowskiVolumes {
    pub fn new(base: Vec<Polytope>, d: usize) -> Result<Self> {
        if let Some(p) = base.first() {
            if let Some(q) = base.iter().find(|q| q.ambient_dim() != p.ambient_dim()) {
                return Err(Error::DimensionMismatch {
                    expected: p.ambient_dim(),
                    got: q.ambient_dim(),
                });
            }
        }
        Ok(MinkowskiVolumes {
            base,
            d,
            cache: HashMap::new(),
        })
    }

    /// `d`-dimensional volume of the weighted Minkowski sum, zero when it is lower dimensional.
    pub fn volume(&mut self, weights: &[usize]) -> Result<Q> {
        if let Some(v) = self.cache.get(weights) {
            return Ok(v.clone());
        }
        let mut sum: Option<Polytope> = None;
        for (p, &w) in self.base.iter().zip(weights) {
            if w == 0 {
                continue;
            }
            let scaled = p.dilate(w as i64);
            sum = Some(match sum {
                None => scaled,
                Some(s) => s.minkowski_sum(&scaled)?,
            });
        }
        let v = match sum {
            Some(s) if s.dim() == self.d => s.volume_in_coordinate_span()?,
            _ => Q::zero(),
        };
        self.cache.insert(weights.to_vec(), v.clone());
        Ok(v)
    }

    /// Mixed volume where base polytope `i` is repeated `mult[i]` times; `sum(mult)` must be `d`.
    pub fn mixed_volume(&mut self, mult: &[usize]) -> Result<Q> {
        let total: usize = mult.iter().sum();
        if total != self.d || mult.len() != self.base.len() {
            return Err(Error::ArgumentCount {
                expected: self.d,
                got: total,
            });
        }
        let mut acc = Q::zero();
        let mut c = vec![0usize; mult.len()];
        loop {
            let size: usize = c.iter().sum();
            if size > 0 {
                let weight: u64 = c
                    .iter()
                    .zip(mult)
                    .map(|(&ci, &mi)| binomial(mi as u64, ci as u64))
                    .product();
                let v = self.volume(&c)?;
                if !v.is_zero() {
                    let term = v * Q::from_integer(BigInt::from(weight));
                    if (self.d - size).is_multiple_of(2) {
                        acc += term;
                    } else {
                        acc -= term;
                    }
                }
            }
            // Advance the mixed-radix counter.
            let mut i = 0;
            loop {
                if i == c.len() {
                    return Ok(acc);
                }
                if c[i] < mult[i] {
                    c[i] += 1;
                    break;
                }
                c[i] = 0;
                i += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;

    fn ip(points: &[&[i64]]) -> Polytope {
        Polytope::from_integer_points(&points.iter().map(|p| p.to_vec()).collect::<Vec<_>>())
            .unwrap()
    }

    #[test]
    fn segments_span_unit_square() {
        let sx = ip(&[&[0, 0], &[1, 0]]);
        let sy = ip(&[&[0, 0], &[0, 1]]);
        assert_eq!(mixed_volume_ie(&[sx, sy], 2).unwrap(), qi(1));
    }

    #[test]
    fn two_standard_triangles() {
        let t = ip(&[&[0, 0], &[1, 0], &[0, 1]]);
        assert_eq!(mixed_volume_ie(&[t.clone(), t], 2).unwrap(), qi(1));
    }

    #[test]
    fn repeated_polytope_gives_factorial_volume() {
        let s = ip(&[&[0, 0, 0], &[2, 0, 0], &[0, 1, 0], &[0, 0, 3], &[1, 1, 1]]);
        let v = s.volume_in_coordinate_span().unwrap();
        let mv = mixed_volume_ie(&[s.clone(), s.clone(), s], 3).unwrap();
        assert_eq!(mv, v * qi(6));
    }

    #[test]
    fn wrong_argument_count() {
        let t = ip(&[&[0, 0], &[1, 0], &[0, 1]]);
        assert!(matches!(
            mixed_volume_ie(&[t], 2),
            Err(Error::ArgumentCount { .. })
        ));
    }

    #[test]
    fn parallel_segments_have_zero_mixed_volume() {
        let s = ip(&[&[0, 0], &[1, 0]]);
        assert_eq!(mixed_volume_ie(&[s.clone(), s], 2).unwrap(), qi(0));
    }
}
