//! Cox-ring data on Π: the monomials `b_t`, the equations `h_1`, `h_2` at `ψ = 0`,
//! their restrictions to torus orbits, and the divisors `L_1`, `L_2`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice_fan::{Cone, Fan, RayLabel};
use crate::polytope::Polytope;
use crate::rational::{qi, Q};

/// A monomial in the Cox variables, sparse over ray indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoxMonomial {
    pub exponents: BTreeMap<usize, u32>,
}

impl CoxMonomial {
    pub fn exponent(&self, ray: usize) -> u32 {
        self.exponents.get(&ray).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.exponents.values().sum()
    }

    pub fn mul(&self, other: &CoxMonomial) -> CoxMonomial {
        let mut e = self.exponents.clone();
        for (&r, &k) in &other.exponents {
            *e.entry(r).or_default() += k;
        }
        CoxMonomial { exponents: e }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoxPolynomial {
    pub terms: Vec<(Q, CoxMonomial)>,
}

impl CoxPolynomial {
    /// Builds a polynomial, merging duplicate monomials and dropping zero coefficients.
    pub fn from_terms(terms: impl IntoIterator<Item = (Q, CoxMonomial)>) -> Self {
        let mut acc: BTreeMap<CoxMonomial, Q> = BTreeMap::new();
        for (c, m) in terms {
            *acc.entry(m).or_insert_with(Q::zero) += c;
        }
        CoxPolynomial {
            terms: acc
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(m, c)| (c, m))
                .collect(),
        }
    }
}

/// Labels of the rays of a fan, required for Π-specific constructions.
fn labels(fan: &Fan) -> Result<&[RayLabel]> {
    if fan.labels.len() != fan.rays.len() {
        return Err(Error::Fan(
            "fan rays are not labelled by u/v triples".into(),
        ));
    }
    Ok(&fan.labels)
}

/// `b_t`: the exponent on the ray with triple `(i,j,k)` is the number of entries equal to `t`.
pub fn monomial_b(fan: &Fan, t: usize) -> Result<CoxMonomial> {
    if !(1..=6).contains(&t) {
        return Err(Error::Config(format!("monomial index {t} outside 1..6")));
    }
    let mut exponents = BTreeMap::new();
    for (r, l) in labels(fan)?.iter().enumerate() {
        let e = l.triple().iter().filter(|&&x| x == t).count() as u32;
        if e > 0 {
            exponents.insert(r, e);
        }
    }
    Ok(CoxMonomial { exponents })
}

fn minus_sum_of_b(fan: &Fan, ts: [usize; 3]) -> Result<CoxPolynomial> {
    let terms = ts
        .iter()
        .map(|&t| Ok((-Q::one(), monomial_b(fan, t)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(CoxPolynomial::from_terms(terms))
}

/// `h_1 = -(b_1 + b_2 + b_3)`.
pub fn h1_at_psi0(fan: &Fan) -> Result<CoxPolynomial> {
    minus_sum_of_b(fan, [1, 2, 3])
}

/// `h_2 = -(b_4 + b_5 + b_6)`.
pub fn h2_at_psi0(fan: &Fan) -> Result<CoxPolynomial> {
    minus_sum_of_b(fan, [4, 5, 6])
}

/// Laurent polynomial in `nvars` torus coordinates with exact coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LaurentPoly {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<i64>, Q>,
}

impl LaurentPoly {
    pub fn new(nvars: usize, terms: impl IntoIterator<Item = (Vec<i64>, Q)>) -> Result<Self> {
        let mut acc: BTreeMap<Vec<i64>, Q> = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    got: e.len(),
                });
            }
            *acc.entry(e).or_insert_with(Q::zero) += c;
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(LaurentPoly { nvars, terms: acc })
    }

    /// `sum c * x^e` with integer coefficients.
    pub fn from_int_terms(nvars: usize, terms: &[(i64, Vec<i64>)]) -> Result<Self> {
        LaurentPoly::new(nvars, terms.iter().map(|(c, e)| (e.clone(), qi(*c))))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_nonzero_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms.keys().next().unwrap().iter().all(|&x| x == 0)
    }

    pub fn num_monomials(&self) -> usize {
        self.terms.len()
    }

    pub fn exponents(&self) -> Vec<Vec<i64>> {
        self.terms.keys().cloned().collect()
    }

    pub fn newton_polytope(&self) -> Result<Polytope> {
        Polytope::from_integer_points(&self.exponents())
    }

    /// Multiplies by the monomial `x^shift`.
    pub fn shift(&self, shift: &[i64]) -> LaurentPoly {
        LaurentPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }
}

/// Restriction of a Cox polynomial to the orbit of `sigma`, in the chart of `delta`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumRestriction {
    /// Positions in `delta` of the generators not in `sigma`; these index the torus coordinates.
    pub coords: Vec<usize>,
    pub poly: LaurentPoly,
}

/// Exponent vector of a Cox monomial in the affine chart of `delta` (one entry per generator).
pub fn chart_exponents(m: &CoxMonomial, delta: &Cone) -> Vec<i64> {
    delta
        .generators
        .iter()
        .map(|&g| m.exponent(g) as i64)
        .collect()
}

/// Drops monomials divisible by a `sigma`-variable and keeps the remaining chart exponents.
pub fn restrict_to_stratum(
    p: &CoxPolynomial,
    sigma: &Cone,
    delta: &Cone,
) -> Result<StratumRestriction> {
    if !sigma.is_face_of(delta) {
        return Err(Error::NotAFace {
            cone: sigma.generators.clone(),
            parent: delta.generators.clone(),
        });
    }
    let coords: Vec<usize> = (0..delta.dim())
        .filter(|&i| !sigma.generators.contains(&delta.generators[i]))
        .collect();
    let sigma_pos: Vec<usize> = (0..delta.dim())
        .filter(|&i| sigma.generators.contains(&delta.generators[i]))
        .collect();
    let mut terms = Vec::new();
    for (c, m) in &p.terms {
        let e = chart_exponents(m, delta);
        if sigma_pos.iter().any(|&i| e[i] > 0) {
            continue;
        }
        terms.push((coords.iter().map(|&i| e[i]).collect(), c.clone()));
    }
    Ok(StratumRestriction {
        poly: LaurentPoly::new(coords.len(), terms)?,
        coords,
    })
}

/// Lattice points of the Newton polytope are exactly the exponents, for a nonzero restriction.
pub fn is_saturated(poly: &LaurentPoly) -> Result<bool> {
    if poly.is_zero() {
        return Ok(true);
    }
    Ok(poly.newton_polytope()?.integral_points().len() == poly.num_monomials())
}

/// Saturation of both restricted equations on the stratum of `sigma` in the chart of `delta`.
pub fn verify_saturation(fan: &Fan, sigma: &Cone, delta: &Cone) -> Result<bool> {
    for h in [h1_at_psi0(fan)?, h2_at_psi0(fan)?] {
        if !is_saturated(&restrict_to_stratum(&h, sigma, delta)?.poly)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A torus-invariant Weil divisor `sum a_r D_r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToricDivisor {
    pub coeffs: Vec<i64>,
}

impl ToricDivisor {
    pub fn zero(n: usize) -> Self {
        ToricDivisor { coeffs: vec![0; n] }
    }

    pub fn neg(&self) -> Self {
        ToricDivisor {
            coeffs: self.coeffs.iter().map(|x| -x).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        ToricDivisor {
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

fn l_divisor(fan: &Fan, family_u: bool, special: RayLabel) -> Result<ToricDivisor> {
    let labels = labels(fan)?;
    let mut coeffs: Vec<i64> = labels
        .iter()
        .map(|l| i64::from(l.is_u() == family_u))
        .collect();
    let idx = labels
        .iter()
        .position(|&l| l == special)
        .ok_or_else(|| Error::Fan(format!("ray {special} missing")))?;
    coeffs[idx] = -1;
    Ok(ToricDivisor { coeffs })
}

/// `L_1 = -D_{v123} + sum of D_u over all u-rays`.
pub fn divisor_l1(fan: &Fan) -> Result<ToricDivisor> {
    l_divisor(fan, true, RayLabel::V(1, 2, 3))
}

/// `L_2 = -D_{u456} + sum of D_v over all v-rays`.
pub fn divisor_l2(fan: &Fan) -> Result<ToricDivisor> {
    l_divisor(fan, false, RayLabel::U(4, 5, 6))
}
