//! Holomorphic Euler characteristics of line bundles on smooth complete toric
//! varieties by localization.
//!
//! Each chart contributes `x^{m_σ} / prod_j (1 - x^{w_j})`. Substituting
//! `x_i = 1 + t^i` turns every term into a Laurent series in one variable; the
//! sum over charts is regular at `t = 0` and its constant term is `χ`.

use std::collections::BTreeMap;
use std::time::Instant;

use log::{debug, info};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cox_geometry::{divisor_l1, divisor_l2, ToricDivisor};
use crate::error::{Error, Result};
use crate::lattice_fan::Fan;
use crate::linalg;
use crate::rational::{binomial_signed, Q};

/// `t^val * (sum_i coeffs[i] t^i) / den + O(t^(val + len))`.
///
/// Coefficients past `len` are unknown and never read.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedLaurent {
    val: i64,
    coeffs: Vec<BigInt>,
    den: BigInt,
}

impl TruncatedLaurent {
    /// Integer series `sum c_i t^(val+i)` known to `c.len()` terms.
    pub fn from_integers(val: i64, coeffs: Vec<BigInt>) -> Self {
        TruncatedLaurent {
            val,
            coeffs,
            den: BigInt::one(),
        }
        .normalized()
    }

    pub fn one(len: usize) -> Self {
        let mut c = vec![BigInt::zero(); len];
        if len > 0 {
            c[0] = BigInt::one();
        }
        TruncatedLaurent::from_integers(0, c)
    }

    /// Leading exponent (the valuation unless the value is zero to precision).
    pub fn valuation(&self) -> i64 {
        self.val
    }

    /// Exclusive bound on the exponents that are known exactly.
    pub fn precision(&self) -> i64 {
        self.val + self.coeffs.len() as i64
    }

    pub fn is_zero_to_precision(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `t^e`, or `None` beyond the known precision.
    pub fn coefficient(&self, e: i64) -> Option<Q> {
        if e >= self.precision() {
            return None;
        }
        if e < self.val {
            return Some(Q::zero());
        }
        Some(Q::new(
            self.coeffs[(e - self.val) as usize].clone(),
            self.den.clone(),
        ))
    }

    /// Strips leading zeros so the first stored coefficient is nonzero.
    fn normalized(mut self) -> Self {
        let lead = self
            .coeffs
            .iter()
            .position(|c| !c.is_zero())
            .unwrap_or(self.coeffs.len());
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.val += lead as i64;
        }
        if self.den.is_negative() {
            self.den = -self.den;
            self.coeffs.iter_mut().for_each(|c| *c = -&*c);
        }
        self
    }

    /// Divides out the content shared by the denominator and all coefficients.
    pub fn reduced(mut self) -> Self {
        let g = self.coeffs.iter().fold(self.den.clone(), |g, c| g.gcd(c));
        if !g.is_one() && !g.is_zero() {
            self.coeffs.iter_mut().for_each(|c| *c /= &g);
            self.den /= &g;
        }
        self
    }

    pub fn mul(&self, o: &Self) -> Self {
        let len = self.coeffs.len().min(o.coeffs.len());
        TruncatedLaurent {
            val: self.val + o.val,
            coeffs: convolve(&self.coeffs, &o.coeffs, len),
            den: &self.den * &o.den,
        }
        .normalized()
    }

    pub fn add(&self, o: &Self) -> Self {
        let val = self.val.min(o.val);
        let prec = self.precision().min(o.precision());
        let len = (prec - val).max(0) as usize;
        let mut coeffs = vec![BigInt::zero(); len];
        for (s, scale) in [(self, &o.den), (o, &self.den)] {
            for (i, c) in s.coeffs.iter().enumerate() {
                let idx = (s.val + i as i64 - val) as usize;
                if idx < len {
                    coeffs[idx] += c * scale;
                }
            }
        }
        TruncatedLaurent {
            val,
            coeffs,
            den: &self.den * &o.den,
        }
        .normalized()
    }

    pub fn neg(&self) -> Self {
        TruncatedLaurent {
            val: self.val,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }

    /// `1 - self`; the known precision is kept.
    pub fn one_minus(&self) -> Self {
        let prec = self.precision();
        if prec <= 0 {
            return TruncatedLaurent {
                val: prec,
                coeffs: vec![],
                den: BigInt::one(),
            };
        }
        let val = self.val.min(0);
        let len = (prec - val) as usize;
        let mut coeffs = vec![BigInt::zero(); len];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[(self.val + i as i64 - val) as usize] = -c;
        }
        coeffs[(-val) as usize] += &self.den;
        TruncatedLaurent {
            val,
            coeffs,
            den: self.den.clone(),
        }
        .normalized()
    }

    /// Multiplicative inverse; fails when the value is zero to the known precision.
    pub fn inverse(&self) -> Result<Self> {
        if self.coeffs.is_empty() {
            return Err(Error::Precision {
                needed: self.val + 1,
                have: self.val,
            });
        }
        // With a_0 = c, 1/A = sum_n E_n t^n / c^(n+1), E_0 = 1,
        // E_n = -sum_{k=1..n} a_k E_{n-k} c^(k-1).
        let a = &self.coeffs;
        let len = a.len();
        let c = &a[0];
        let mut cpow = Vec::with_capacity(len + 1);
        cpow.push(BigInt::one());
        for i in 0..len {
            let next = &cpow[i] * c;
            cpow.push(next);
        }
        let mut e: Vec<BigInt> = Vec::with_capacity(len);
        e.push(BigInt::one());
        for n in 1..len {
            let mut s = BigInt::zero();
            for k in 1..=n {
                if !a[k].is_zero() {
                    s += &a[k] * &e[n - k] * &cpow[k - 1];
                }
            }
            e.push(-s);
        }
        let coeffs = e
            .iter()
            .enumerate()
            .map(|(n, en)| &self.den * en * &cpow[len - 1 - n])
            .collect();
        Ok(TruncatedLaurent {
            val: -self.val,
            coeffs,
            den: cpow[len].clone(),
        }
        .normalized())
    }
}

fn convolve(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// Integer coefficients of `prod_i (1 + t^(i+1))^(m_i)` up to `t^(len-1)`.
pub fn monomial_coeffs(m: &[i64], len: usize) -> Vec<BigInt> {
    let mut acc = vec![BigInt::zero(); len];
    if len == 0 {
        return acc;
    }
    acc[0] = BigInt::one();
    for (i, &mi) in m.iter().enumerate() {
        if mi == 0 {
            continue;
        }
        let step = i + 1;
        // Sparse factor: C(mi, k) at t^(k*step).
        let factor: Vec<(usize, BigInt)> = (0..)
            .map(|k: u64| (k as usize * step, k))
            .take_while(|&(e, _)| e < len)
            .map(|(e, k)| (e, binomial_signed(mi, k)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        let mut next = vec![BigInt::zero(); len];
        for (e, c) in &factor {
            for (j, x) in acc.iter().enumerate().take(len - e) {
                if !x.is_zero() {
                    next[e + j] += c * x;
                }
            }
        }
        acc = next;
    }
    acc
}

/// `prod_i (1 + t^i)^(m_i)` with `len` known terms.
pub fn monomial_by_vector(m: &[i64], len: usize) -> TruncatedLaurent {
    TruncatedLaurent::from_integers(0, monomial_coeffs(m, len))
}

/// A smooth complete fan in `Z^n`, as the localization formula needs it.
#[derive(Clone, Debug)]
pub struct SmoothFanData {
    pub dim: usize,
    pub rays: Vec<Vec<i64>>,
    pub cones: Vec<Vec<usize>>,
}

impl SmoothFanData {
    pub fn new(rays: Vec<Vec<i64>>, cones: Vec<Vec<usize>>) -> Result<Self> {
        let dim = rays.first().map_or(0, |r| r.len());
        for c in &cones {
            let a: Vec<Vec<i64>> = c.iter().map(|&g| rays[g].clone()).collect();
            if c.len() != dim || linalg::det(&a).abs() != 1 {
                return Err(Error::NotSimplicial(c.clone()));
            }
        }
        Ok(SmoothFanData { dim, rays, cones })
    }

    pub fn from_fan(fan: &Fan) -> Result<Self> {
        let rays = (0..fan.rays.len()).map(|i| fan.ray_proj(i)).collect();
        let cones = fan
            .maximal_cones
            .iter()
            .map(|c| c.generators.clone())
            .collect();
        SmoothFanData::new(rays, cones)
    }
}

/// Per-chart data: `A^{-1}` (columns are the dual basis `w_j`).
struct Chart {
    inv: Vec<Vec<i64>>,
}

impl Chart {
    fn new(fan: &SmoothFanData, cone: &[usize]) -> Result<Self> {
        let a: Vec<Vec<i64>> = cone.iter().map(|&g| fan.rays[g].clone()).collect();
        let inv =
            linalg::inverse_unimodular(&a).ok_or_else(|| Error::NotSimplicial(cone.to_vec()))?;
        Ok(Chart { inv })
    }

    fn dual_vector(&self, j: usize) -> Vec<i64> {
        self.inv.iter().map(|row| row[j]).collect()
    }

    /// `m_σ = -A^{-1} b` with `b_i` the divisor coefficient on generator `i`.
    fn m_sigma(&self, b: &[i64]) -> Vec<i64> {
        self.inv.iter().map(|row| -linalg::dot(row, b)).collect()
    }
}

/// `1 / prod_j (1 - x^{w_j})` for one chart.
fn chart_denominator_inverse(chart: &Chart, n: usize, guard: usize) -> Result<TruncatedLaurent> {
    let mut den = TruncatedLaurent::one(guard);
    for j in 0..n {
        let factor = monomial_by_vector(&chart.dual_vector(j), guard).one_minus();
        if factor.is_zero_to_precision() {
            return Err(Error::Precision {
                needed: factor.precision() + 1,
                have: guard as i64,
            });
        }
        // Keep relative precision `guard` for the unit part.
        let factor = TruncatedLaurent {
            coeffs: factor.coeffs.into_iter().take(guard).collect(),
            ..factor
        };
        den = den.mul(&factor);
    }
    den.inverse()
}

/// One localization term `x^{m_σ} / prod (1 - x^{w_j})` for `cone` and divisor coefficients `d`.
pub fn chi_piece(
    fan: &SmoothFanData,
    cone: &[usize],
    d: &[i64],
    guard: usize,
) -> Result<TruncatedLaurent> {
    let chart = Chart::new(fan, cone)?;
    let inv = chart_denominator_inverse(&chart, fan.dim, guard)?;
    let b: Vec<i64> = cone.iter().map(|&g| d[g]).collect();
    Ok(monomial_by_vector(&chart.m_sigma(&b), guard).mul(&inv))
}

/// Exact sum of the coefficients of exponents `<= 0` over many pieces.
#[derive(Clone, Debug, Default)]
struct PartialSum {
    coeffs: BTreeMap<i64, Q>,
    precision: Option<i64>,
}

impl PartialSum {
    fn add_piece(&mut self, p: &TruncatedLaurent) {
        let prec = p.precision();
        self.precision = Some(self.precision.map_or(prec, |q| q.min(prec)));
        let p = p.clone().reduced();
        for e in p.valuation()..=0.min(prec - 1) {
            let c = p.coefficient(e).expect("within precision");
            if !c.is_zero() {
                *self.coeffs.entry(e).or_insert_with(Q::zero) += c;
            }
        }
    }

    fn merge(mut self, o: PartialSum) -> PartialSum {
        for (e, c) in o.coeffs {
            *self.coeffs.entry(e).or_insert_with(Q::zero) += c;
        }
        self.precision = match (self.precision, o.precision) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self
    }

    fn finish(&self, guard: usize) -> Result<i64> {
        let prec = self.precision.unwrap_or(i64::MAX);
        if prec <= 0 {
            return Err(Error::Precision {
                needed: guard as i64 + 1 - prec,
                have: guard as i64,
            });
        }
        if let Some((&e, _)) = self.coeffs.iter().find(|(&e, c)| e < 0 && !c.is_zero()) {
            return Err(Error::PrincipalPart(-e));
        }
        let c = self.coeffs.get(&0).cloned().unwrap_or_else(Q::zero);
        if !c.is_integer() {
            return Err(Error::NonIntegral(c.to_string()));
        }
        Ok(c.to_integer()
            .to_i64()
            .expect("Euler characteristic fits in i64"))
    }
}

/// `χ(O(D))` for several divisors at once, sharing each chart's denominator.
pub fn chi_of_divisors_with_guard(
    fan: &SmoothFanData,
    divisors: &[Vec<i64>],
    guard: usize,
) -> Result<Vec<i64>> {
    let sums = fan
        .cones
        .par_iter()
        .map(|cone| -> Result<Vec<PartialSum>> {
            let chart = Chart::new(fan, cone)?;
            let inv = chart_denominator_inverse(&chart, fan.dim, guard)?;
            divisors
                .iter()
                .map(|d| {
                    let b: Vec<i64> = cone.iter().map(|&g| d[g]).collect();
                    let piece = monomial_by_vector(&chart.m_sigma(&b), guard).mul(&inv);
                    let mut s = PartialSum::default();
                    s.add_piece(&piece);
                    Ok(s)
                })
                .collect()
        })
        .try_reduce(
            || vec![PartialSum::default(); divisors.len()],
            |a, b| Ok(a.into_iter().zip(b).map(|(x, y)| x.merge(y)).collect()),
        )?;
    sums.iter().map(|s| s.finish(guard)).collect()
}

/// As [`chi_of_divisors_with_guard`], doubling the guard on precision failures.
pub fn chi_of_divisors(
    fan: &SmoothFanData,
    divisors: &[Vec<i64>],
    guard: usize,
) -> Result<(Vec<i64>, usize)> {
    let mut g = guard;
    loop {
        match chi_of_divisors_with_guard(fan, divisors, g) {
            Err(Error::Precision { .. }) if g < 4096 => {
                debug!("guard {g} insufficient, doubling");
                g *= 2;
            }
            other => return other.map(|v| (v, g)),
        }
    }
}

pub fn chi_of_divisor(fan: &SmoothFanData, d: &[i64], guard: usize) -> Result<i64> {
    Ok(chi_of_divisors(fan, &[d.to_vec()], guard)?.0[0])
}

/// Koszul identity `χ(O_W) = χ(O) - χ(O(-Y1)) - χ(O(-Y2)) + χ(O(-Y1-Y2))`.
pub fn koszul_chi_w0(chi_o: i64, chi_m1: i64, chi_m2: i64, chi_m12: i64) -> i64 {
    chi_o - chi_m1 - chi_m2 + chi_m12
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HoloReport {
    #[serde(rename = "chi_O")]
    pub chi_o: i64,
    #[serde(rename = "chi_mL1")]
    pub chi_ml1: i64,
    #[serde(rename = "chi_mL2")]
    pub chi_ml2: i64,
    #[serde(rename = "chi_mL1mL2")]
    pub chi_ml1ml2: i64,
    #[serde(rename = "chi_W0")]
    pub chi_w0: i64,
    pub guard: usize,
    pub timing_ms: u128,
}

/// The four divisor classes `0, -L1, -L2, -L1-L2` on Π.
pub fn pi_divisors(fan: &Fan) -> Result<[ToricDivisor; 4]> {
    let l1 = divisor_l1(fan)?;
    let l2 = divisor_l2(fan)?;
    Ok([
        ToricDivisor::zero(fan.rays.len()),
        l1.neg(),
        l2.neg(),
        l1.add(&l2).neg(),
    ])
}

/// Holomorphic Euler characteristics on Π and the Koszul assembly.
pub fn holo_report(fan: &Fan, guard: usize) -> Result<HoloReport> {
    let start = Instant::now();
    let data = SmoothFanData::from_fan(fan)?;
    let divs: Vec<Vec<i64>> = pi_divisors(fan)?.iter().map(|d| d.coeffs.clone()).collect();
    let (chis, used) = chi_of_divisors(&data, &divs, guard)?;
    let timing_ms = start.elapsed().as_millis();
    info!("holomorphic chi {chis:?} at guard {used} in {timing_ms} ms");
    Ok(HoloReport {
        chi_o: chis[0],
        chi_ml1: chis[1],
        chi_ml2: chis[2],
        chi_ml1ml2: chis[3],
        chi_w0: koszul_chi_w0(chis[0], chis[1], chis[2], chis[3]),
        guard: used,
        timing_ms,
    })
}

/// Polynomial with integer coefficients, lowest degree first.
type Poly = Vec<BigInt>;

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    convolve(a, b, a.len() + b.len() - 1)
}

fn poly_sub(a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    let mut out: Poly = (0..n)
        .map(|i| a.get(i).cloned().unwrap_or_default() - b.get(i).cloned().unwrap_or_default())
        .collect();
    while out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    out
}

fn poly_add(a: &Poly, b: &Poly) -> Poly {
    poly_sub(a, &b.iter().map(|c| -c).collect())
}

/// `(1 + t^k)^e` for `e >= 0`.
fn binomial_poly(k: usize, e: i64) -> Poly {
    let mut p = vec![BigInt::zero(); k * e as usize + 1];
    for j in 0..=e as u64 {
        p[k * j as usize] = binomial_signed(e, j);
    }
    p
}

/// Exact rational function `num / den` in `t`, used to cross-check the truncated mode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    pub num: Poly,
    pub den: Poly,
}

impl RationalFunction {
    /// `prod (1 + t^i)^(m_i)` split into positive and negative parts.
    pub fn monomial(m: &[i64]) -> Self {
        let mut num = vec![BigInt::one()];
        let mut den = vec![BigInt::one()];
        for (i, &mi) in m.iter().enumerate() {
            let p = binomial_poly(i + 1, mi.abs());
            if mi > 0 {
                num = poly_mul(&num, &p);
            } else if mi < 0 {
                den = poly_mul(&den, &p);
            }
        }
        RationalFunction { num, den }
    }

    pub fn add(&self, o: &Self) -> Self {
        RationalFunction {
            num: poly_add(&poly_mul(&self.num, &o.den), &poly_mul(&o.num, &self.den)),
            den: poly_mul(&self.den, &o.den),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        RationalFunction {
            num: poly_mul(&self.num, &o.num),
            den: poly_mul(&self.den, &o.den),
        }
    }

    pub fn inverse(&self) -> Self {
        RationalFunction {
            num: self.den.clone(),
            den: self.num.clone(),
        }
    }

    /// `1 - self`.
    pub fn one_minus(&self) -> Self {
        RationalFunction {
            num: poly_sub(&self.den, &self.num),
            den: self.den.clone(),
        }
    }

    fn valuation(p: &Poly) -> Option<usize> {
        p.iter().position(|c| !c.is_zero())
    }

    /// Value at `t = 0`; errors if there is a pole.
    pub fn value_at_zero(&self) -> Result<Q> {
        let Some(vn) = Self::valuation(&self.num) else {
            return Ok(Q::zero());
        };
        let vd = Self::valuation(&self.den).ok_or(Error::NonUnit)?;
        match vn.cmp(&vd) {
            std::cmp::Ordering::Greater => Ok(Q::zero()),
            std::cmp::Ordering::Equal => Ok(Q::new(self.num[vn].clone(), self.den[vd].clone())),
            std::cmp::Ordering::Less => Err(Error::PrincipalPart((vd - vn) as i64)),
        }
    }

    /// Laurent expansion with `len` known terms.
    pub fn expand(&self, len: usize) -> Result<TruncatedLaurent> {
        let pad = |p: &Poly| -> Vec<BigInt> {
            let mut v = p.clone();
            v.resize(len.max(p.len()), BigInt::zero());
            v
        };
        let vd = Self::valuation(&self.den).ok_or(Error::NonUnit)?;
        let num = TruncatedLaurent::from_integers(0, pad(&self.num));
        let den = TruncatedLaurent::from_integers(0, pad(&self.den));
        let den = TruncatedLaurent {
            coeffs: den.coeffs.into_iter().take(len).collect(),
            ..den
        };
        debug_assert_eq!(den.val, vd as i64);
        Ok(num.mul(&den.inverse()?))
    }
}

/// Exact localization term of one chart as a rational function.
pub fn chi_piece_exact(fan: &SmoothFanData, cone: &[usize], d: &[i64]) -> Result<RationalFunction> {
    let chart = Chart::new(fan, cone)?;
    let b: Vec<i64> = cone.iter().map(|&g| d[g]).collect();
    let mut acc = RationalFunction::monomial(&chart.m_sigma(&b));
    for j in 0..fan.dim {
        acc = acc.mul(
            &RationalFunction::monomial(&chart.dual_vector(j))
                .one_minus()
                .inverse(),
        );
    }
    Ok(acc)
}

/// `χ(O(D))` by exact rational-function summation (small fans only).
pub fn chi_of_divisor_exact(fan: &SmoothFanData, d: &[i64]) -> Result<i64> {
    let mut total = RationalFunction {
        num: vec![],
        den: vec![BigInt::one()],
    };
    for cone in &fan.cones {
        total = total.add(&chi_piece_exact(fan, cone, d)?);
    }
    let v = total.value_at_zero()?;
    if !v.is_integer() {
        return Err(Error::NonIntegral(v.to_string()));
    }
    Ok(v.to_integer().to_i64().expect("fits"))
}

/// Compares the exact and truncated terms of the given charts coefficient by coefficient.
pub fn exact_chart_agreement(
    fan: &SmoothFanData,
    d: &[i64],
    cones: &[usize],
    guard: usize,
) -> Result<bool> {
    for &ci in cones {
        let cone = &fan.cones[ci];
        let exact = chi_piece_exact(fan, cone, d)?.expand(guard)?;
        let trunc = chi_piece(fan, cone, d, guard)?;
        let top = trunc.precision().min(exact.precision());
        let lo = trunc.valuation().min(exact.valuation());
        if (lo..top).any(|e| exact.coefficient(e) != trunc.coefficient(e)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Hand-built smooth toric varieties used as oracles.
pub mod toy {
    use super::SmoothFanData;

    pub fn p1() -> SmoothFanData {
        SmoothFanData::new(vec![vec![1], vec![-1]], vec![vec![0], vec![1]]).unwrap()
    }

    pub fn p2() -> SmoothFanData {
        SmoothFanData::new(
            vec![vec![1, 0], vec![0, 1], vec![-1, -1]],
            vec![vec![0, 1], vec![1, 2], vec![2, 0]],
        )
        .unwrap()
    }

    pub fn p1xp1() -> SmoothFanData {
        SmoothFanData::new(
            vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]],
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]],
        )
        .unwrap()
    }

    /// `O(d)` on P^1 or P^2 (all weight on the last ray).
    pub fn o_d(fan: &SmoothFanData, d: i64) -> Vec<i64> {
        let mut v = vec![0; fan.rays.len()];
        *v.last_mut().unwrap() = d;
        v
    }

    /// `O(d1, d2)` on P^1 x P^1.
    pub fn o_d1d2(d1: i64, d2: i64) -> Vec<i64> {
        vec![0, 0, d1, d2]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn monomials() {
        assert_eq!(
            monomial_by_vector(&[0, 0, 0, 0, 0], 4),
            TruncatedLaurent::one(4)
        );
        assert_eq!(monomial_coeffs(&[1, 0, 0, 0, 0], 4), ints(&[1, 1, 0, 0]));
        assert_eq!(
            monomial_coeffs(&[-1, 0, 0, 0, 0], 5),
            ints(&[1, -1, 1, -1, 1])
        );
        assert_eq!(monomial_coeffs(&[0, 1], 4), ints(&[1, 0, 1, 0]));
    }

    #[test]
    fn inverse_of_geometric_series() {
        // 1/(2 - t) = 1/2 + t/4 + t^2/8 + ...
        let s = TruncatedLaurent::from_integers(0, ints(&[2, -1, 0, 0, 0]));
        let inv = s.inverse().unwrap();
        for k in 0..5 {
            assert_eq!(
                inv.coefficient(k).unwrap(),
                Q::new(1.into(), BigInt::from(2).pow(k as u32 + 1))
            );
        }
        assert_eq!(inv.coefficient(5), None);
        let back = s.mul(&inv);
        assert_eq!(back.coefficient(0).unwrap(), qi(1));
        assert_eq!(back.coefficient(3).unwrap(), qi(0));
    }

    #[test]
    fn pole_orders() {
        // 1 - (1 + t)^-1 = t - t^2 + ..., so its inverse has a simple pole.
        let f = monomial_by_vector(&[-1], 8).one_minus();
        assert_eq!(f.valuation(), 1);
        let inv = f.inverse().unwrap();
        assert_eq!(inv.valuation(), -1);
        assert_eq!(inv.coefficient(-1).unwrap(), qi(1));
        assert_eq!(inv.coefficient(0).unwrap(), qi(1));
    }

    #[test]
    fn identity_chart_pole_order() {
        let rays: Vec<Vec<i64>> = (0..5)
            .map(|i| (0..5).map(|j| i64::from(i == j)).collect())
            .collect();
        let chart = Chart { inv: rays };
        let inv = chart_denominator_inverse(&chart, 5, 32).unwrap();
        assert_eq!(inv.valuation(), -15);
    }

    #[test]
    fn toy_closed_forms() {
        let (p1, p2, pp) = (toy::p1(), toy::p2(), toy::p1xp1());
        for d in -4..=4 {
            assert_eq!(chi_of_divisor(&p1, &toy::o_d(&p1, d), 16).unwrap(), d + 1);
            assert_eq!(
                chi_of_divisor(&p2, &toy::o_d(&p2, d), 16).unwrap(),
                (d + 1) * (d + 2) / 2
            );
            for d2 in -4..=4 {
                assert_eq!(
                    chi_of_divisor(&pp, &toy::o_d1d2(d, d2), 16).unwrap(),
                    (d + 1) * (d2 + 1)
                );
            }
        }
    }

    #[test]
    fn exact_mode_matches() {
        let p2 = toy::p2();
        for d in -3..=3 {
            let v = toy::o_d(&p2, d);
            assert_eq!(
                chi_of_divisor_exact(&p2, &v).unwrap(),
                chi_of_divisor(&p2, &v, 16).unwrap()
            );
            for c in &p2.cones {
                let exact = chi_piece_exact(&p2, c, &v).unwrap().expand(24).unwrap();
                let trunc = chi_piece(&p2, c, &v, 24).unwrap();
                for e in trunc.valuation()..trunc.precision().min(exact.precision()) {
                    assert_eq!(exact.coefficient(e), trunc.coefficient(e));
                }
            }
        }
    }

    #[test]
    fn koszul() {
        assert_eq!(koszul_chi_w0(1, 0, 0, 1), 2);
        assert_eq!(koszul_chi_w0(1, 0, 0, 0), 1);
        assert_eq!(koszul_chi_w0(1, 3, 5, 2), koszul_chi_w0(1, 5, 3, 2));
    }
}
