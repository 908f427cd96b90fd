//! Truncated Laurent series `kappa((pi))`, Newton polygons of q-linear
//! polynomials, Hensel lifting, and the local analyses at `infinity` and `p`.

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::drinfeld::{reduce_at, DrinfeldModule};
use crate::error::{Error, Result};
use crate::field::CoeffField;
use crate::finite_field::{poly_roots, splitting_degree, FiniteField, FqElem};
use crate::function_field::{ord_at, v_infinity, PrimeIdeal, RatFunc, RatFuncField};
use crate::poly::Poly;
use crate::skew::{SkewPoly, SkewRing};

/// Absolute precision of exact elements.
const EXACT: i64 = i64::MAX / 8;

/// `sum c_i pi^(val + i) + O(pi^prec)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSeries {
    val: i64,
    coeffs: Vec<FqElem>,
    prec: i64,
}

impl LaurentSeries {
    /// Valuation, or a lower bound for it when the series is zero to precision.
    pub fn valuation(&self) -> i64 {
        if self.coeffs.is_empty() {
            self.prec
        } else {
            self.val
        }
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec >= EXACT
    }

    /// Coefficient of `pi^i`; `None` beyond the known precision.
    pub fn coeff(&self, i: i64, zero: &FqElem) -> Option<FqElem> {
        if i >= self.prec {
            return None;
        }
        if i < self.val || i - self.val >= self.coeffs.len() as i64 {
            return Some(zero.clone());
        }
        Some(self.coeffs[(i - self.val) as usize].clone())
    }

    /// The residue of an integral series.
    pub fn residue(&self, zero: &FqElem) -> Result<FqElem> {
        if self.valuation() < 0 {
            return Err(Error::NotIntegral);
        }
        self.coeff(0, zero).ok_or(Error::InsufficientPrecision)
    }
}

/// `kappa((pi))` with relative precision `window`; `pi` is `1/T` or `T - c`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalField {
    residue: FiniteField,
    window: i64,
    center: Center,
}

/// Which place the uniformizer belongs to.
#[derive(Clone, Debug, PartialEq)]
pub enum Center {
    Infinity,
    /// `pi = T - c` with `c` in `F_q`.
    Linear(FqElem),
}

impl LocalField {
    /// `residue` must contain `F_q` as its base prefix.
    pub fn new(residue: FiniteField, center: Center, window: usize) -> Result<Self> {
        if window == 0 {
            return Err(Error::InsufficientPrecision);
        }
        Ok(LocalField {
            residue,
            window: window as i64,
            center,
        })
    }

    pub fn residue_field(&self) -> &FiniteField {
        &self.residue
    }

    pub fn window(&self) -> usize {
        self.window as usize
    }

    fn make(&self, mut val: i64, mut coeffs: Vec<FqElem>, prec: i64) -> LaurentSeries {
        let k = &self.residue;
        let lead = coeffs.iter().position(|c| !k.is_zero(c));
        match lead {
            None => {
                let prec = if prec >= EXACT { EXACT } else { prec };
                return LaurentSeries {
                    val: prec,
                    coeffs: Vec::new(),
                    prec,
                };
            }
            Some(i) => {
                coeffs.drain(..i);
                val += i as i64;
            }
        }
        let mut prec = prec.min(EXACT);
        if coeffs.len() as i64 > self.window {
            prec = prec.min(val + self.window);
        }
        if prec < EXACT {
            prec = prec.min(val + self.window);
            coeffs.truncate((prec - val).max(0) as usize);
        }
        while coeffs.last().is_some_and(|c| k.is_zero(c)) {
            coeffs.pop();
        }
        LaurentSeries { val, coeffs, prec }
    }

    /// An element of `kappa` as a constant series.
    pub fn from_residue(&self, c: &FqElem) -> LaurentSeries {
        self.make(0, vec![c.clone()], EXACT)
    }

    /// `pi^n`.
    pub fn uniformizer_pow(&self, n: i64) -> LaurentSeries {
        self.make(n, vec![self.residue.one()], EXACT)
    }

    /// A series from coefficients starting at `pi^val`, known to `O(pi^prec)`.
    pub fn series(&self, val: i64, coeffs: Vec<FqElem>, prec: Option<i64>) -> LaurentSeries {
        self.make(val, coeffs, prec.unwrap_or(EXACT))
    }

    /// Expansion of `x` in `F_q(T)` around the center.
    pub fn embed(&self, field: &RatFuncField, x: &RatFunc) -> LaurentSeries {
        if x.is_zero() {
            return self.zero();
        }
        let num = self.embed_poly(field, x.num());
        let den = self.embed_poly(field, x.den());
        self.div(&num, &den).expect("denominator is nonzero")
    }

    fn embed_poly(&self, field: &RatFuncField, a: &Poly<FqElem>) -> LaurentSeries {
        let k = &self.residue;
        let lift = |c: &FqElem| k.lift_from_prefix(c);
        match &self.center {
            Center::Infinity => {
                // a(T) = T^d * sum a_{d-i} (1/T)^i
                let d = a.degree().expect("nonzero") as i64;
                let coeffs = a.coeffs().iter().rev().map(lift).collect();
                self.make(-d, coeffs, EXACT)
            }
            Center::Linear(c) => {
                // Taylor coefficients: a(pi + c)
                let ring = field.poly_ring();
                let shift = ring.from_coeffs(vec![c.clone(), field.fq().one()]);
                let b = ring.compose(a, &shift);
                self.make(0, b.coeffs().iter().map(lift).collect(), EXACT)
            }
        }
    }

    pub fn display(&self, x: &LaurentSeries) -> String {
        let sym = match self.center {
            Center::Infinity => "(1/T)",
            Center::Linear(_) => "pi",
        };
        let mut terms = Vec::new();
        for (i, c) in x.coeffs.iter().enumerate() {
            if self.residue.is_zero(c) {
                continue;
            }
            let cs = self.residue.display(c);
            let cs = if cs.contains('+') {
                format!("({cs})")
            } else {
                cs
            };
            terms.push(format!("{cs}*{sym}^{}", x.val + i as i64));
        }
        if !x.is_exact() {
            terms.push(format!("O({sym}^{})", x.prec));
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

fn sat_add(a: i64, b: i64) -> i64 {
    if a >= EXACT || b >= EXACT {
        EXACT
    } else {
        a + b
    }
}

impl CoeffField for LocalField {
    type Elem = LaurentSeries;

    fn zero(&self) -> LaurentSeries {
        self.make(0, Vec::new(), EXACT)
    }

    fn one(&self) -> LaurentSeries {
        self.from_residue(&self.residue.one())
    }

    /// Zero to the known precision.
    fn is_zero(&self, a: &LaurentSeries) -> bool {
        a.coeffs.is_empty()
    }

    fn add(&self, a: &LaurentSeries, b: &LaurentSeries) -> LaurentSeries {
        let prec = a.prec.min(b.prec);
        let val = a.valuation().min(b.valuation()).min(prec);
        let end = if prec >= EXACT {
            [a, b]
                .iter()
                .filter(|s| !s.coeffs.is_empty())
                .map(|s| s.val + s.coeffs.len() as i64)
                .max()
                .unwrap_or(val)
        } else {
            prec
        };
        let k = &self.residue;
        let mut v = vec![k.zero(); (end - val).max(0) as usize];
        for s in [a, b] {
            for (i, c) in s.coeffs.iter().enumerate() {
                let idx = s.val + i as i64 - val;
                if idx >= 0 && (idx as usize) < v.len() {
                    v[idx as usize] = k.add(&v[idx as usize], c);
                }
            }
        }
        self.make(val, v, prec)
    }

    fn neg(&self, a: &LaurentSeries) -> LaurentSeries {
        LaurentSeries {
            val: a.val,
            coeffs: a.coeffs.iter().map(|c| self.residue.neg(c)).collect(),
            prec: a.prec,
        }
    }

    fn mul(&self, a: &LaurentSeries, b: &LaurentSeries) -> LaurentSeries {
        let prec = sat_add(a.prec, b.valuation()).min(sat_add(b.prec, a.valuation()));
        if a.coeffs.is_empty() || b.coeffs.is_empty() {
            return self.make(prec, Vec::new(), prec);
        }
        let val = a.val + b.val;
        let mut len = a.coeffs.len() + b.coeffs.len() - 1;
        if prec < EXACT {
            len = len.min((prec - val).max(0) as usize);
        }
        len = len.min(self.window as usize);
        let k = &self.residue;
        let mut v = vec![k.zero(); len];
        for (i, x) in a.coeffs.iter().enumerate().take(len) {
            if k.is_zero(x) {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate().take(len - i) {
                v[i + j] = k.add(&v[i + j], &k.mul(x, y));
            }
        }
        let full = a.coeffs.len() + b.coeffs.len() - 1;
        let prec = if full > len {
            prec.min(val + len as i64)
        } else {
            prec
        };
        self.make(val, v, prec)
    }

    fn inv(&self, a: &LaurentSeries) -> Option<LaurentSeries> {
        if a.coeffs.is_empty() {
            return None;
        }
        let k = &self.residue;
        let rel = if a.is_exact() {
            self.window
        } else {
            (a.prec - a.val).min(self.window)
        };
        let n = rel as usize;
        let a0inv = k.inv(&a.coeffs[0]).unwrap();
        let mut b: Vec<FqElem> = Vec::with_capacity(n);
        b.push(a0inv.clone());
        for m in 1..n {
            let mut s = k.zero();
            for j in 1..=m.min(a.coeffs.len() - 1) {
                s = k.add(&s, &k.mul(&a.coeffs[j], &b[m - j]));
            }
            b.push(k.neg(&k.mul(&a0inv, &s)));
        }
        // exact only when a is a monomial
        let prec = if a.is_exact() && a.coeffs.len() == 1 {
            EXACT
        } else {
            -a.val + rel
        };
        Some(self.make(-a.val, b, prec))
    }

    fn q(&self) -> u64 {
        self.residue.q()
    }

    /// `(sum c_i pi^i)^q = sum c_i^q pi^(q i)`.
    fn frob(&self, a: &LaurentSeries) -> LaurentSeries {
        let q = self.q() as i64;
        let k = &self.residue;
        if a.coeffs.is_empty() {
            let p = if a.is_exact() { EXACT } else { a.prec * q };
            return self.make(p, Vec::new(), p);
        }
        let mut v = vec![k.zero(); (a.coeffs.len() - 1) * q as usize + 1];
        for (i, c) in a.coeffs.iter().enumerate() {
            v[i * q as usize] = k.frob(c);
        }
        let prec = if a.is_exact() { EXACT } else { a.prec * q };
        self.make(a.val * q, v, prec)
    }

    fn from_int(&self, n: i64) -> LaurentSeries {
        self.from_residue(&self.residue.from_int(n))
    }

    fn display(&self, a: &LaurentSeries) -> String {
        LocalField::display(self, a)
    }
}

/// A segment of a Newton polygon.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub slope: Ratio<i64>,
    pub length: i64,
}

impl Segment {
    /// Valuation of the roots this segment accounts for.
    pub fn root_valuation(&self) -> Ratio<i64> {
        -self.slope
    }
}

/// Lower convex hull of `(x_i, y_i)`. A segment of slope `s` and length `l`
/// accounts for `l` roots of valuation `-s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonPolygon {
    pub vertices: Vec<(i64, Ratio<i64>)>,
    pub segments: Vec<Segment>,
}

impl NewtonPolygon {
    /// Number of roots with valuation `> 0`, `= 0`, `< 0`.
    pub fn root_counts(&self) -> (i64, i64, i64) {
        let zero = Ratio::from_integer(0);
        let mut c = (0, 0, 0);
        for s in &self.segments {
            match s.root_valuation().cmp(&zero) {
                std::cmp::Ordering::Greater => c.0 += s.length,
                std::cmp::Ordering::Equal => c.1 += s.length,
                std::cmp::Ordering::Less => c.2 += s.length,
            }
        }
        c
    }

    pub fn is_degenerate(&self) -> bool {
        self.segments.is_empty()
    }

    /// `(numerator, denominator, length)` triples.
    pub fn triples(&self) -> Vec<(i64, i64, i64)> {
        self.segments
            .iter()
            .map(|s| (*s.slope.numer(), *s.slope.denom(), s.length))
            .collect()
    }
}

/// Lower hull by the monotone chain, dropping collinear middle points.
/// Points with `y = None` (zero coefficients) are ignored.
pub fn newton_polygon(points: &[(i64, Option<Ratio<i64>>)]) -> Result<NewtonPolygon> {
    let mut pts: Vec<(i64, Ratio<i64>)> = points
        .iter()
        .filter_map(|(x, y)| y.map(|y| (*x, y)))
        .collect();
    pts.sort();
    pts.dedup_by(|b, a| {
        // keep the lower point for repeated abscissae
        if a.0 == b.0 {
            a.1 = a.1.min(b.1);
            true
        } else {
            false
        }
    });
    if pts.len() < 2 {
        return Err(Error::TooFewPoints);
    }
    let cross = |o: &(i64, Ratio<i64>), a: &(i64, Ratio<i64>), b: &(i64, Ratio<i64>)| {
        Ratio::from_integer(a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * Ratio::from_integer(b.0 - o.0)
    };
    let mut hull: Vec<(i64, Ratio<i64>)> = Vec::new();
    for p in pts {
        while hull.len() >= 2
            && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], &p) <= Ratio::from_integer(0)
        {
            hull.pop();
        }
        hull.push(p);
    }
    let segments = hull
        .windows(2)
        .map(|w| Segment {
            slope: (w[1].1 - w[0].1) / Ratio::from_integer(w[1].0 - w[0].0),
            length: w[1].0 - w[0].0,
        })
        .collect();
    Ok(NewtonPolygon {
        vertices: hull,
        segments,
    })
}

/// Points `(q^i, v(a_i))` for the nonzero coefficients of a q-linear polynomial.
fn qlinear_points(q: u64, vals: &[Option<i64>]) -> Result<Vec<(i64, Option<Ratio<i64>>)>> {
    let mut out = Vec::with_capacity(vals.len());
    let mut x: i64 = 1;
    for (i, v) in vals.iter().enumerate() {
        if i > 0 {
            x = x
                .checked_mul(q as i64)
                .ok_or(Error::FieldTooLarge(u128::MAX, i64::MAX as u128))?;
        }
        out.push((x, v.map(Ratio::from_integer)));
    }
    Ok(out)
}

fn polygon_from_vals(q: u64, vals: &[Option<i64>]) -> Result<NewtonPolygon> {
    let finite: Vec<usize> = (0..vals.len()).filter(|&i| vals[i].is_some()).collect();
    match finite.len() {
        0 => Err(Error::ZeroPolynomial),
        1 => {
            // a single term c tau^k: no nonzero roots
            let x = (q as i64).pow(finite[0] as u32);
            Ok(NewtonPolygon {
                vertices: vec![(x, Ratio::from_integer(vals[finite[0]].unwrap()))],
                segments: Vec::new(),
            })
        }
        _ => newton_polygon(&qlinear_points(q, vals)?),
    }
}

/// Polygon of a q-linear polynomial over a local field.
pub fn polygon_of_qlinear(
    local: &LocalField,
    f: &SkewPoly<LaurentSeries>,
) -> Result<NewtonPolygon> {
    let vals: Vec<Option<i64>> = f
        .coeffs()
        .iter()
        .map(|c| (!local.is_zero(c)).then(|| c.valuation()))
        .collect();
    polygon_from_vals(local.q(), &vals)
}

/// Where the valuations of a global polynomial are measured.
#[derive(Clone, Debug, PartialEq)]
pub enum ValuationPlace<'a> {
    Finite(&'a PrimeIdeal),
    Infinity,
}

/// Polygon of a q-linear polynomial over `F_q(T)` with respect to `ord_p` or `v_inf`.
pub fn polygon_at_place(
    field: &RatFuncField,
    f: &SkewPoly<RatFunc>,
    place: ValuationPlace<'_>,
) -> Result<NewtonPolygon> {
    let vals = f
        .coeffs()
        .iter()
        .map(|c| {
            if c.is_zero() {
                return Ok(None);
            }
            match place {
                ValuationPlace::Finite(p) => ord_at(field, c, p).map(Some),
                ValuationPlace::Infinity => v_infinity(c).map(Some),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    polygon_from_vals(field.q(), &vals)
}

/// Solves `f(x) = rhs` by `x <- x - (f(x) - rhs) / a_0` starting from `seed`.
///
/// Requires integral coefficients with `a_0` a unit, so every root of the
/// reduced equation is simple. Stops once the residual has valuation
/// `>= target`; the residual is recomputed from scratch on the returned root.
pub fn hensel_lift(
    local: &LocalField,
    f: &SkewPoly<LaurentSeries>,
    rhs: &LaurentSeries,
    seed: &FqElem,
    target: i64,
) -> Result<LaurentSeries> {
    let ring = SkewRing::new(local.clone());
    let k = local.residue_field();
    let zero = k.zero();
    let a0 = ring.derivative(f);
    if local.is_zero(&a0) || a0.valuation() != 0 {
        return Err(Error::HenselInapplicable(
            "linear coefficient is not a unit".into(),
        ));
    }
    if f.coeffs()
        .iter()
        .any(|c| !local.is_zero(c) && c.valuation() < 0)
    {
        return Err(Error::HenselInapplicable(
            "coefficients are not integral".into(),
        ));
    }
    if rhs.valuation() < 0 {
        return Err(Error::HenselInapplicable(
            "right-hand side is not integral".into(),
        ));
    }
    // reduced equation at the seed
    let mut reduced = k.zero();
    let mut sp = seed.clone();
    for (i, c) in f.coeffs().iter().enumerate() {
        if i > 0 {
            sp = k.frob(&sp);
        }
        reduced = k.add(&reduced, &k.mul(&c.residue(&zero)?, &sp));
    }
    if reduced != rhs.residue(&zero)? {
        return Err(Error::HenselInapplicable(
            "seed is not a root of the reduction".into(),
        ));
    }
    let a0inv = local.inv(&a0).unwrap();
    let mut x = local.from_residue(seed);
    let mut last = i64::MIN;
    loop {
        let e = local.sub(&ring.evaluate(f, &x), rhs);
        let v = e.valuation();
        if v >= target {
            return Ok(x);
        }
        if v <= last {
            return Err(Error::InsufficientPrecision);
        }
        last = v;
        x = local.sub(&x, &local.mul(&e, &a0inv));
    }
}

/// Evidence for one torsion level in [`unramified_splitting_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelEvidence {
    pub level: usize,
    /// Degree `m` of the residue field `F_{q^m}` holding every root.
    pub residue_degree: usize,
    pub root_count: u64,
    pub min_residual_valuation: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnramifiedReport {
    /// Polygon of `G(x) = (T - c)^-1 phi_{T-c}(x)` at infinity.
    pub polygon: NewtonPolygon,
    pub reduced_root_count: u64,
    pub levels: Vec<LevelEvidence>,
    pub precision: i64,
}

/// Certifies that every root of `phi_{f^k}`, `f = T - c`, lies in
/// `F_{q^m}((1/T))`: level 1 lifts the roots of `x + x^(q^r)`, level `j` solves
/// `G(x) = beta / (T - c)` for each level `j-1` root `beta`.
pub fn unramified_splitting_check(
    module: &DrinfeldModule<RatFuncField>,
    p: &PrimeIdeal,
    level: usize,
    precision: usize,
) -> Result<UnramifiedReport> {
    if p.degree() != 1 {
        return Err(Error::OutOfScope(format!(
            "deg p = {} > 1 at infinity, exploratory only",
            p.degree()
        )));
    }
    let field = module.field();
    let fq = field.fq().clone();
    let ring = module.ring();
    let f = field.from_poly(p.generator());
    let finv = field.inv(&f).unwrap();
    let g_global = ring.scale_left(&finv, &module.phi_a(p.generator()));
    let polygon = polygon_at_place(field, &g_global, ValuationPlace::Infinity)?;
    let q = field.q();
    let r = module.rank();
    let qr = q.pow(r as u32);
    if polygon.segments.len() != 1
        || polygon.segments[0].slope != Ratio::from_integer(0)
        || polygon.segments[0].length != qr as i64 - 1
    {
        return Err(Error::CertificationFailed(format!(
            "G polygon at infinity is {:?}",
            polygon.triples()
        )));
    }

    // reduction of G and its roots
    let reduced: Vec<FqElem> = g_global
        .coeffs()
        .iter()
        .map(|c| crate::function_field::residue_at_infinity(field, c))
        .collect::<Result<_>>()?;
    let gbar = SkewRing::new(fq.clone()).from_coeffs(reduced);
    let gbar_poly = SkewRing::new(fq.clone()).to_qlinear(&gbar);
    if fq.is_zero(&gbar.coeffs()[0]) {
        return Err(Error::CertificationFailed(
            "reduction of G is inseparable".into(),
        ));
    }
    let m = splitting_degree(&fq, &gbar_poly)?;
    let kappa = fq.extension(m, "w")?;
    let seeds = poly_roots(&kappa, &kappa.lift_poly(&gbar_poly))?;
    if seeds.len() as u64 != qr || seeds.iter().any(|s| s.multiplicity != 1) {
        return Err(Error::CertificationFailed(format!(
            "reduction of G has {} distinct roots, expected {qr}",
            seeds.len()
        )));
    }
    if level == 0 {
        return Ok(UnramifiedReport {
            polygon,
            reduced_root_count: qr,
            levels: Vec::new(),
            precision: precision as i64,
        });
    }

    // working precision covers the pole orders of phi_{f^k}
    let fk = field.poly_ring().pow(p.generator(), level as u64);
    let phi_fk = module.phi_a(&fk);
    let pole = phi_fk
        .coeffs()
        .iter()
        .filter(|c| !c.is_zero())
        .map(|c| -v_infinity(c).unwrap())
        .max()
        .unwrap_or(0)
        .max(0);
    let target = precision as i64;
    let work = target + pole + 8;
    let local = LocalField::new(kappa.clone(), Center::Infinity, work as usize)?;
    let lring = SkewRing::new(local.clone());
    let embed_skew = |s: &SkewPoly<RatFunc>| {
        lring.from_coeffs(s.coeffs().iter().map(|c| local.embed(field, c)).collect())
    };
    let g_local = embed_skew(&g_global);
    let finv_local = local.embed(field, &finv);

    let mut levels = Vec::new();
    let mut current: Vec<LaurentSeries> = vec![local.zero()];
    for j in 1..=level {
        let rhs: Vec<LaurentSeries> = current.iter().map(|b| local.mul(b, &finv_local)).collect();
        let lifted: Vec<Result<LaurentSeries>> = rhs
            .par_iter()
            .flat_map_iter(|rhs| {
                seeds
                    .iter()
                    .map(|s| hensel_lift(&local, &g_local, rhs, &s.value, work - pole))
                    .collect::<Vec<_>>()
            })
            .collect();
        let next = lifted.into_iter().collect::<Result<Vec<_>>>()?;
        // independent residual for phi_{f^j}
        let phi_j = embed_skew(&module.phi_a(&field.poly_ring().pow(p.generator(), j as u64)));
        let min_residual = next
            .par_iter()
            .map(|x| lring.evaluate(&phi_j, x).valuation())
            .min()
            .unwrap_or(EXACT);
        if min_residual < target {
            return Err(Error::CertificationFailed(format!(
                "level {j} residual valuation {min_residual} < {target}"
            )));
        }
        levels.push(LevelEvidence {
            level: j,
            residue_degree: m,
            root_count: next.len() as u64,
            min_residual_valuation: min_residual.min(EXACT),
        });
        current = next;
    }
    Ok(UnramifiedReport {
        polygon,
        reduced_root_count: qr,
        levels,
        precision: target,
    })
}

/// Counting data read off the polygon of `phi_f` at `p = (f)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InertiaPolygonReport {
    pub polygon: NewtonPolygon,
    /// Roots of positive valuation, plus zero: `|phi^0[p]|`.
    pub small_root_count: u64,
    /// Roots of valuation `<= 0`.
    pub remaining_root_count: u64,
    pub height: usize,
    /// Denominators of the slopes carrying positive-valuation roots.
    pub positive_slope_denominators: Vec<i64>,
}

pub fn inertia_polygon_report(
    module: &DrinfeldModule<RatFuncField>,
    p: &PrimeIdeal,
) -> Result<InertiaPolygonReport> {
    let field = module.field();
    let phi_f = module.phi_a(p.generator());
    for c in phi_f.coeffs() {
        if !c.is_zero() && ord_at(field, c, p)? < 0 {
            return Err(Error::BadPrime(
                crate::function_field::display_poly_compact(field.fq(), p.generator(), "T"),
                "no integral model, reduction is not stable".into(),
            ));
        }
    }
    let reduced = reduce_at(module, p)?;
    let height = reduced.height()?;
    let polygon = polygon_at_place(field, &phi_f, ValuationPlace::Finite(p))?;
    let (pos, zero, neg) = polygon.root_counts();
    let positive_slope_denominators = polygon
        .segments
        .iter()
        .filter(|s| s.root_valuation() > Ratio::from_integer(0))
        .map(|s| *s.slope.denom())
        .collect();
    Ok(InertiaPolygonReport {
        polygon,
        small_root_count: pos as u64 + 1,
        remaining_root_count: (zero + neg) as u64,
        height,
        positive_slope_denominators,
    })
}
