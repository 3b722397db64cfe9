//! The generated operation `T(x,y) = f⁽⁻¹⁾(T*(f(x), f(y)))`, its top-patched
//! variant, and an exhaustive associativity oracle.

use std::collections::HashMap;

use thiserror::Error;

use crate::base_op::{OpDescriptor, OpError};
use crate::certifier::{certify, CertError, CertifyOptions};
use crate::exact::{Interval, RangeSet};
use crate::generator::{GeneratorError, PiecewiseFn};
use crate::scalar::{in_unit, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeneratedError {
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error(transparent)]
    Op(#[from] OpError),
    #[error(transparent)]
    Cert(#[from] CertError),
    #[error("the top-patched variant needs a t-norm base, `{0}` is not one")]
    PatchNeedsTNorm(String),
    #[error("{0} is outside [0,1]")]
    OutsideUnit(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Plain,
    /// `min{x, y}` whenever `max{x, y} = 1`.
    TopPatched,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedOp<S> {
    generator: PiecewiseFn<S>,
    base: OpDescriptor<S>,
    variant: Variant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RangeCondition {
    /// `T*(f(x), f(y)) ∈ Ran(f) ∪ [0, f(0⁺)]` for all tested pairs.
    pub eq11: bool,
    /// `f(f⁽⁻¹⁾(v)) = v` for every tested value `v = T*(f(x), f(y))` in `Ran(f)`.
    pub eq12: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleWitness<S> {
    pub x: S,
    pub y: S,
    pub z: S,
    /// `T(T(x,y),z)`.
    pub lhs: S,
    /// `T(x,T(y,z))`.
    pub rhs: S,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult<S> {
    pub witness: Option<OracleWitness<S>>,
    pub triples: usize,
    pub sample_description: String,
}

impl<S> OracleResult<S> {
    pub fn associative_on_sample(&self) -> bool {
        self.witness.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Remark33Report {
    /// `T(x, 1) ≤ x` on every probe, for the plain variant.
    pub upper_bound_at_one: bool,
    /// T1–T4 for the top-patched variant; `None` unless `⊗` is certified
    /// associative.
    pub patched_is_t_norm: Option<bool>,
    pub failures: Vec<String>,
}

impl<S: Scalar> GeneratedOp<S> {
    pub fn new(generator: PiecewiseFn<S>, base: OpDescriptor<S>, variant: Variant) -> Result<Self, GeneratedError> {
        generator.require_non_decreasing()?;
        if variant == Variant::TopPatched && !base.is_t_norm() {
            return Err(GeneratedError::PatchNeedsTNorm(base.id.clone()));
        }
        if base.table().is_some() {
            let range = generator.range_of()?;
            let fits = range.points().is_some_and(|pts| pts.iter().all(|v| base.accepts(v)));
            if !fits {
                return Err(OpError::NotInCarrier(format!("range {range}")).into());
            }
        }
        Ok(GeneratedOp { generator, base, variant })
    }

    pub fn generator(&self) -> &PiecewiseFn<S> {
        &self.generator
    }

    pub fn base(&self) -> &OpDescriptor<S> {
        &self.base
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn with_variant(&self, variant: Variant) -> Result<Self, GeneratedError> {
        Self::new(self.generator.clone(), self.base.clone(), variant)
    }

    pub fn try_eval(&self, x: &S, y: &S) -> Result<S, GeneratedError> {
        for v in [x, y] {
            if !in_unit(v) {
                return Err(GeneratedError::OutsideUnit(v.to_string()));
            }
        }
        if self.variant == Variant::TopPatched && (x.is_one() || y.is_one()) {
            return Ok(x.clone().min(y.clone()));
        }
        let (fx, fy) = (self.generator.eval(x)?, self.generator.eval(y)?);
        Ok(self.generator.pseudo_inverse(&self.base.try_apply(&fx, &fy)?))
    }

    /// `T(x, y)`. Panics outside `[0,1]²`.
    pub fn t_eval(&self, x: &S, y: &S) -> S {
        self.try_eval(x, y).unwrap_or_else(|e| panic!("T({x}, {y}): {e}"))
    }

    pub fn range_condition(&self) -> Result<RangeCondition, GeneratedError> {
        let f = &self.generator;
        let m = f.range_of()?;
        let low = RangeSet::interval(Interval::closed(S::zero(), f.right_limit(&S::zero())?));
        let image = self.base.box_image(&m, &m)?;
        let eq11 = image.is_subset_of(&m.union(&low));
        let probes = match image.intersection(&m).points() {
            Some(pts) => pts,
            None => {
                let samples = m.sample_points();
                let mut vals = Vec::new();
                for a in &samples {
                    for b in &samples {
                        let v = self.base.apply(a, b);
                        if m.member(&v) {
                            vals.push(v);
                        }
                    }
                }
                vals
            }
        };
        let mut eq12 = true;
        for v in &probes {
            eq12 &= f.eval(&f.pseudo_inverse(v))? == *v;
        }
        Ok(RangeCondition { eq11, eq12 })
    }

    /// Exhaustive check of `T(T(x,y),z) = T(x,T(y,z))` over `points³`.
    pub fn brute_force_oracle(&self, points: &[S]) -> Result<OracleResult<S>, GeneratedError> {
        let mut pts = points.to_vec();
        pts.sort();
        pts.dedup();
        let n = pts.len();
        let witness = match self.variant {
            Variant::Plain => self.scan_interned(&pts)?,
            Variant::TopPatched => self.scan_memo(&pts)?,
        };
        Ok(OracleResult {
            witness,
            triples: n * n * n,
            sample_description: format!("all triples over {n} points"),
        })
    }

    fn scan_memo(&self, pts: &[S]) -> Result<Option<OracleWitness<S>>, GeneratedError> {
        let mut memo = Memo::new(self);
        let mut table = Vec::with_capacity(pts.len());
        for x in pts {
            table.push(pts.iter().map(|y| memo.eval(x, y)).collect::<Result<Vec<_>, _>>()?);
        }
        for (i, x) in pts.iter().enumerate() {
            for (j, y) in pts.iter().enumerate() {
                for (k, z) in pts.iter().enumerate() {
                    let lhs = memo.eval(&table[i][j], z)?;
                    let rhs = memo.eval(x, &table[j][k])?;
                    if lhs != rhs {
                        return Ok(Some(OracleWitness { x: x.clone(), y: y.clone(), z: z.clone(), lhs, rhs }));
                    }
                }
            }
        }
        Ok(None)
    }

    /// Plain `T` depends on `(f(x), f(y))` only, so after interning the
    /// `f`-values of the points and of every `T`-value the scan compares
    /// indices.
    fn scan_interned(&self, pts: &[S]) -> Result<Option<OracleWitness<S>>, GeneratedError> {
        let mut st = InternedT { op: self, values: Interner::default(), results: Interner::default(), result_f: Vec::new(), cache: HashMap::new() };
        let mut fi = Vec::with_capacity(pts.len());
        for x in pts {
            if !in_unit(x) {
                return Err(GeneratedError::OutsideUnit(x.to_string()));
            }
            fi.push(st.values.intern(&self.generator.eval(x)?).0);
        }
        let n = pts.len();
        let mut table = vec![vec![0usize; n]; n];
        for i in 0..n {
            for j in 0..n {
                table[i][j] = st.t(fi[i], fi[j])?;
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let lhs = st.t(st.result_f[table[i][j]], fi[k])?;
                    let rhs = st.t(fi[i], st.result_f[table[j][k]])?;
                    if lhs != rhs {
                        return Ok(Some(OracleWitness {
                            x: pts[i].clone(),
                            y: pts[j].clone(),
                            z: pts[k].clone(),
                            lhs: st.results.items[lhs].clone(),
                            rhs: st.results.items[rhs].clone(),
                        }));
                    }
                }
            }
        }
        Ok(None)
    }

    /// Remark 3.3 checks for a t-norm base; `probes` are added to the
    /// representative grid.
    pub fn remark33_checks(&self, probes: &[S]) -> Result<Remark33Report, GeneratedError> {
        if !self.base.is_t_norm() {
            return Err(GeneratedError::PatchNeedsTNorm(self.base.id.clone()));
        }
        let mut failures = Vec::new();
        let plain = self.with_variant(Variant::Plain)?;
        let grid = representative_grid(&self.generator);
        let one = S::one();
        for x in grid.iter().chain(probes) {
            let t = plain.try_eval(x, &one)?;
            if t > *x {
                failures.push(format!("T({x}, 1) = {t} > {x}"));
            }
        }
        let upper_bound_at_one = failures.is_empty();

        let verdict = certify(&self.generator, &self.base, &CertifyOptions::default())?;
        let patched_is_t_norm = if verdict.is_associative() == Some(true) {
            let patched = self.with_variant(Variant::TopPatched)?;
            let before = failures.len();
            failures.extend(t_norm_axiom_failures(&patched, &grid)?);
            Some(failures.len() == before)
        } else {
            None
        };
        Ok(Remark33Report { upper_bound_at_one, patched_is_t_norm, failures })
    }
}

struct Interner<S> {
    items: Vec<S>,
    index: HashMap<S, usize>,
}

impl<S> Default for Interner<S> {
    fn default() -> Self {
        Interner { items: Vec::new(), index: HashMap::new() }
    }
}

impl<S: Scalar> Interner<S> {
    fn intern(&mut self, v: &S) -> (usize, bool) {
        if let Some(&i) = self.index.get(v) {
            return (i, false);
        }
        self.items.push(v.clone());
        self.index.insert(v.clone(), self.items.len() - 1);
        (self.items.len() - 1, true)
    }
}

struct InternedT<'g, S> {
    op: &'g GeneratedOp<S>,
    values: Interner<S>,
    results: Interner<S>,
    /// `f`-value index of every interned result.
    result_f: Vec<usize>,
    cache: HashMap<(usize, usize), usize>,
}

impl<S: Scalar> InternedT<'_, S> {
    fn t(&mut self, a: usize, b: usize) -> Result<usize, GeneratedError> {
        if let Some(&r) = self.cache.get(&(a, b)) {
            return Ok(r);
        }
        let v = self.op.base.try_apply(&self.values.items[a], &self.values.items[b])?;
        let out = self.op.generator.pseudo_inverse(&v);
        let (r, fresh) = self.results.intern(&out);
        if fresh {
            let fv = self.op.generator.eval(&out)?;
            self.result_f.push(self.values.intern(&fv).0);
        }
        self.cache.insert((a, b), r);
        Ok(r)
    }
}

/// `T` evaluated through caches of `f` and of `T` keyed by `(f(x), f(y))`,
/// on which it depends alone outside the patched top edge.
struct Memo<'g, S> {
    op: &'g GeneratedOp<S>,
    f: HashMap<S, S>,
    t: HashMap<(S, S), S>,
}

impl<'g, S: Scalar> Memo<'g, S> {
    fn new(op: &'g GeneratedOp<S>) -> Self {
        Memo { op, f: HashMap::new(), t: HashMap::new() }
    }

    fn f(&mut self, x: &S) -> Result<S, GeneratedError> {
        if let Some(v) = self.f.get(x) {
            return Ok(v.clone());
        }
        if !in_unit(x) {
            return Err(GeneratedError::OutsideUnit(x.to_string()));
        }
        let v = self.op.generator.eval(x)?;
        self.f.insert(x.clone(), v.clone());
        Ok(v)
    }

    fn eval(&mut self, x: &S, y: &S) -> Result<S, GeneratedError> {
        if self.op.variant == Variant::TopPatched && (x.is_one() || y.is_one()) {
            return self.op.try_eval(x, y);
        }
        let key = (self.f(x)?, self.f(y)?);
        if let Some(v) = self.t.get(&key) {
            return Ok(v.clone());
        }
        let v = self.op.generator.pseudo_inverse(&self.op.base.try_apply(&key.0, &key.1)?);
        self.t.insert(key, v.clone());
        Ok(v)
    }
}

/// Violations of commutativity, associativity, monotonicity and neutrality of
/// 1 on `grid`.
pub fn t_norm_axiom_failures<S: Scalar>(t: &GeneratedOp<S>, grid: &[S]) -> Result<Vec<String>, GeneratedError> {
    let mut out = Vec::new();
    let mut memo = Memo::new(t);
    let one = S::one();
    for x in grid {
        if memo.eval(x, &one)? != *x {
            out.push(format!("T({x}, 1) ≠ {x}"));
        }
        for y in grid {
            let xy = memo.eval(x, y)?;
            if xy != memo.eval(y, x)? {
                out.push(format!("T({x}, {y}) ≠ T({y}, {x})"));
            }
            for z in grid {
                if y <= z && xy > memo.eval(x, z)? {
                    out.push(format!("T({x}, ·) decreases between {y} and {z}"));
                }
                let yz = memo.eval(y, z)?;
                if memo.eval(&xy, z)? != memo.eval(x, &yz)? {
                    out.push(format!("not associative at ({x}, {y}, {z})"));
                }
            }
        }
    }
    Ok(out)
}

/// `0`, `1`, every breakpoint and override, the quarter points of every piece
/// and sample points of every component of the restricted domain.
pub fn representative_grid<S: Scalar>(f: &PiecewiseFn<S>) -> Vec<S> {
    sample_grid(f, 4)
}

/// [`representative_grid`] with each piece cut into `density` equal parts.
pub fn sample_grid<S: Scalar>(f: &PiecewiseFn<S>, density: u32) -> Vec<S> {
    let density = i64::from(density.max(1));
    let mut out = vec![S::zero(), S::one()];
    out.extend(f.breakpoints());
    out.extend(f.overrides().iter().map(|(x, _)| x.clone()));
    for p in f.pieces() {
        let width = p.x_hi.clone() - p.x_lo.clone();
        for i in 1..density {
            out.push(p.x_lo.clone() + width.clone() * S::from_frac(i, density));
        }
    }
    if let Ok(g) = f.restrict_domain() {
        out.extend(g.domain.sample_points());
    }
    out.sort();
    out.dedup();
    out
}
