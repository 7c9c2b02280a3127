//! Matrix differential operators over `K` and the construction of `D(λ)`
//! from `D(λ)Ψ = λΨ`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::biform::{binomial, t_exponents};
use crate::error::{CoreError, Result};
use crate::field::{ExpContext, ExpRat, Field};
use crate::linalg::{self, Matrix};
use crate::mero::MeroFunc;
use crate::module::{grade_basis, GradeSpace, ModuleBasis, ModuleElement};
use crate::parse;
use crate::poly::{gauss_piece, join_signed};

/// `Σ_α a_α ∂^α` with coefficients in `K`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarOp {
    ctx: Arc<ExpContext>,
    terms: BTreeMap<Vec<u32>, ExpRat>,
}

fn add_index(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// All `γ ≤ α` componentwise, with `Π C(α_i, γ_i)`.
fn sub_indices(alpha: &[u32]) -> Vec<(Vec<u32>, usize)> {
    let mut out = vec![(Vec::new(), 1usize)];
    for &a in alpha {
        out = out
            .into_iter()
            .flat_map(|(g, c)| {
                (0..=a).map(move |x| {
                    let mut g = g.clone();
                    g.push(x);
                    (g, c * binomial(a as usize, x as usize))
                })
            })
            .collect();
    }
    out
}

/// Multi-indices of total order `≤ k`, by order ascending then descending lex.
pub fn multi_indices(n: usize, k: u32) -> Vec<Vec<u32>> {
    (0..=k).flat_map(|d| t_exponents(n, d)).collect()
}

fn derive_multi(a: &ExpRat, gamma: &[u32]) -> Result<ExpRat> {
    let mut out = a.clone();
    for (j, &g) in gamma.iter().enumerate() {
        for _ in 0..g {
            if out.is_zero() {
                return Ok(out);
            }
            out = out.derive(j)?;
        }
    }
    Ok(out)
}

fn operator_names(n: usize, ascii: bool) -> Vec<String> {
    let d = if ascii { "d" } else { "∂" };
    if n == 2 {
        vec![format!("{d}x"), format!("{d}y")]
    } else {
        (1..=n).map(|i| format!("{d}{i}")).collect()
    }
}

impl ScalarOp {
    pub fn zero(ctx: &Arc<ExpContext>) -> Self {
        ScalarOp { ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(a: ExpRat) -> Self {
        let n = a.context().n();
        ScalarOp::monomial(vec![0; n], a)
    }

    pub fn one(ctx: &Arc<ExpContext>) -> Self {
        ScalarOp::constant(ExpRat::one(ctx))
    }

    /// `a · ∂^α`.
    pub fn monomial(alpha: Vec<u32>, a: ExpRat) -> Self {
        let ctx = a.context().clone();
        let mut terms = BTreeMap::new();
        if !a.is_zero() {
            terms.insert(alpha, a);
        }
        ScalarOp { ctx, terms }
    }

    /// `∂_j` (0-based).
    pub fn partial(ctx: &Arc<ExpContext>, j: usize) -> Result<Self> {
        let n = ctx.n();
        if j >= n {
            return Err(CoreError::IndexOutOfRange { index: j, n });
        }
        let mut alpha = vec![0; n];
        alpha[j] = 1;
        Ok(ScalarOp::monomial(alpha, ExpRat::one(ctx)))
    }

    pub fn from_terms(ctx: &Arc<ExpContext>, terms: impl IntoIterator<Item = (Vec<u32>, ExpRat)>) -> Result<Self> {
        let n = ctx.n();
        let mut out = ScalarOp::zero(ctx);
        for (alpha, a) in terms {
            if alpha.len() != n {
                return Err(CoreError::ArityMismatch(format!(
                    "multi-index of length {} for {n} variables",
                    alpha.len()
                )));
            }
            if a.context() != ctx && **a.context() != **ctx {
                return Err(CoreError::ContextMismatch);
            }
            out.accumulate(alpha, a);
        }
        Ok(out)
    }

    fn accumulate(&mut self, alpha: Vec<u32>, a: ExpRat) {
        if a.is_zero() {
            return;
        }
        match self.terms.get_mut(&alpha) {
            Some(old) => {
                let s = &*old + &a;
                if s.is_zero() {
                    self.terms.remove(&alpha);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(alpha, a);
            }
        }
    }

    pub fn context(&self) -> &Arc<ExpContext> {
        &self.ctx
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, ExpRat> {
        &self.terms
    }

    pub fn coeff(&self, alpha: &[u32]) -> ExpRat {
        self.terms.get(alpha).cloned().unwrap_or_else(|| ExpRat::zero(&self.ctx))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest `|α|` present; 0 for the zero operator.
    pub fn order(&self) -> u32 {
        self.terms.keys().map(|a| a.iter().sum()).max().unwrap_or(0)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (alpha, a) in &rhs.terms {
            out.accumulate(alpha.clone(), a.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        ScalarOp { ctx: self.ctx.clone(), terms: self.terms.iter().map(|(k, v)| (k.clone(), -v)).collect() }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    /// Left multiplication by a function.
    pub fn left_mul(&self, a: &ExpRat) -> Self {
        let mut out = ScalarOp::zero(&self.ctx);
        for (alpha, c) in &self.terms {
            out.accumulate(alpha.clone(), a * c);
        }
        out
    }

    /// `self ∘ rhs`, expanding `∂^α b = Σ_{γ≤α} C(α,γ) (∂^γ b) ∂^(α-γ)`.
    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        let mut out = ScalarOp::zero(&self.ctx);
        for (alpha, a) in &self.terms {
            let splits = sub_indices(alpha);
            for (beta, b) in &rhs.terms {
                for (gamma, c) in &splits {
                    let db = derive_multi(b, gamma)?;
                    if db.is_zero() {
                        continue;
                    }
                    let rest: Vec<u32> = alpha.iter().zip(gamma).map(|(x, g)| x - g).collect();
                    let coeff = (a * &db).scale(&crate::field::GaussQ::from_int(*c as i64));
                    out.accumulate(add_index(&rest, beta), coeff);
                }
            }
        }
        Ok(out)
    }

    /// Terms sorted by order descending, then by `α` descending.
    fn display_terms(&self) -> Vec<(&Vec<u32>, &ExpRat)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| {
            let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        v
    }

    /// Text with `∂x, ∂y` (`∂1, …` for `n ≠ 2`), or `dx, dy` when `ascii`.
    pub fn to_text(&self, ascii: bool) -> String {
        let names = operator_names(self.ctx.n(), ascii);
        join_signed(self.display_terms().into_iter().map(|(alpha, c)| {
            let mut parts = Vec::new();
            for (name, &e) in names.iter().zip(alpha) {
                match e {
                    0 => {}
                    1 => parts.push(name.clone()),
                    _ => parts.push(format!("{name}^{e}")),
                }
            }
            let mono = parts.join("*");
            match c.as_gauss() {
                Some(g) => gauss_piece(&g, &mono),
                None if mono.is_empty() => (false, format!("({c})")),
                None => (false, format!("({c})*{mono}")),
            }
        }))
    }

    /// Parses text such as `1/4*(dy^2 - dx^2) + i*(1+q)/(1-q)*dx`.
    pub fn parse(s: &str, ctx: &Arc<ExpContext>) -> Result<Self> {
        let n = ctx.n();
        let mut names = Vec::new();
        for (k, (a, b)) in operator_names(n, true).into_iter().zip(operator_names(n, false)).enumerate() {
            names.push((a, k));
            names.push((b, k));
        }
        if n == 2 {
            for k in 0..2 {
                names.push((format!("d{}", k + 1), k));
                names.push((format!("∂{}", k + 1), k));
            }
        }
        let p = parse::parse_poly_exprat(s, &names, n, ctx)?;
        ScalarOp::from_terms(ctx, p.into_terms())
    }
}

impl fmt::Display for ScalarOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(false))
    }
}

/// `N×N` matrix of scalar operators.
#[derive(Clone, Debug, PartialEq)]
pub struct DiffOp {
    ctx: Arc<ExpContext>,
    entries: Vec<Vec<ScalarOp>>,
}

impl DiffOp {
    pub fn zero(ctx: &Arc<ExpContext>, size: usize) -> Self {
        DiffOp { ctx: ctx.clone(), entries: vec![vec![ScalarOp::zero(ctx); size]; size] }
    }

    pub fn identity(ctx: &Arc<ExpContext>, size: usize) -> Self {
        let mut out = DiffOp::zero(ctx, size);
        for i in 0..size {
            out.entries[i][i] = ScalarOp::one(ctx);
        }
        out
    }

    /// `op · I`.
    pub fn scalar(op: ScalarOp, size: usize) -> Self {
        let ctx = op.ctx.clone();
        let mut out = DiffOp::zero(&ctx, size);
        for i in 0..size {
            out.entries[i][i] = op.clone();
        }
        out
    }

    pub fn from_rows(ctx: &Arc<ExpContext>, entries: Vec<Vec<ScalarOp>>) -> Result<Self> {
        let size = entries.len();
        if let Some(bad) = entries.iter().find(|r| r.len() != size) {
            return Err(CoreError::SizeMismatch(size, bad.len()));
        }
        Ok(DiffOp { ctx: ctx.clone(), entries })
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn context(&self) -> &Arc<ExpContext> {
        &self.ctx
    }

    pub fn entry(&self, i: usize, j: usize) -> &ScalarOp {
        &self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<ScalarOp>] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[ScalarOp] {
        &self.entries[i]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(ScalarOp::is_zero)
    }

    pub fn order(&self) -> u32 {
        self.entries.iter().flatten().map(ScalarOp::order).max().unwrap_or(0)
    }

    fn check_size(&self, rhs: &Self) -> Result<()> {
        if self.size() != rhs.size() {
            return Err(CoreError::SizeMismatch(self.size(), rhs.size()));
        }
        if self.ctx != rhs.ctx && *self.ctx != *rhs.ctx {
            return Err(CoreError::ContextMismatch);
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_size(rhs)?;
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.add(y)).collect())
            .collect();
        Ok(DiffOp { ctx: self.ctx.clone(), entries })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.check_size(rhs)?;
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.sub(y)).collect())
            .collect();
        Ok(DiffOp { ctx: self.ctx.clone(), entries })
    }

    /// `(AB)_ik = Σ_j A_ij ∘ B_jk`.
    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        self.check_size(rhs)?;
        let size = self.size();
        let mut out = DiffOp::zero(&self.ctx, size);
        for i in 0..size {
            for k in 0..size {
                let mut acc = ScalarOp::zero(&self.ctx);
                for j in 0..size {
                    if self.entries[i][j].is_zero() || rhs.entries[j][k].is_zero() {
                        continue;
                    }
                    acc = acc.add(&self.entries[i][j].compose(&rhs.entries[j][k])?);
                }
                out.entries[i][k] = acc;
            }
        }
        Ok(out)
    }

    pub fn commutator(&self, rhs: &Self) -> Result<Self> {
        self.compose(rhs)?.sub(&rhs.compose(self)?)
    }

    pub fn to_text(&self, ascii: bool) -> String {
        let mut out = String::new();
        for (i, row) in self.entries.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                out.push_str(&format!("[{}{}] {}\n", i + 1, j + 1, e.to_text(ascii)));
            }
        }
        out
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(false))
    }
}

/// The square system of one grade: generators `f^(k-1-|α|) ∂^α ψ_j`
/// restricted to the free coordinates of the grade, and its inverse.
#[derive(Debug)]
struct GradeSystem {
    space: GradeSpace,
    alphas: Vec<Vec<u32>>,
    inverse: Matrix<ExpRat>,
}

/// Expands module elements in the free basis and builds `D(λ)`. Derivatives
/// of the basis and the per-grade inverses are cached.
#[derive(Debug)]
pub struct OperatorBuilder {
    basis: ModuleBasis,
    derivatives: Mutex<HashMap<(usize, Vec<u32>), ModuleElement>>,
    systems: Mutex<HashMap<u32, Arc<GradeSystem>>>,
}

impl OperatorBuilder {
    pub fn new(basis: ModuleBasis) -> Self {
        OperatorBuilder { basis, derivatives: Mutex::new(HashMap::new()), systems: Mutex::new(HashMap::new()) }
    }

    pub fn basis(&self) -> &ModuleBasis {
        &self.basis
    }

    fn context(&self) -> &Arc<ExpContext> {
        self.basis.context()
    }

    /// `∂^α ψ_j`.
    pub fn derivative(&self, j: usize, alpha: &[u32]) -> Result<ModuleElement> {
        if let Some(e) = self.derivatives.lock().expect("cache lock").get(&(j, alpha.to_vec())) {
            return Ok(e.clone());
        }
        let out = match alpha.iter().position(|&a| a > 0) {
            None => self.basis.elements()[j].clone(),
            Some(i) => {
                let mut prev = alpha.to_vec();
                prev[i] -= 1;
                self.derivative(j, &prev)?.derive(i)?
            }
        };
        self.derivatives.lock().expect("cache lock").insert((j, alpha.to_vec()), out.clone());
        Ok(out)
    }

    fn system(&self, k: u32) -> Result<Arc<GradeSystem>> {
        if let Some(s) = self.systems.lock().expect("cache lock").get(&k) {
            return Ok(s.clone());
        }
        let data = self.basis.data();
        let space = grade_basis(data, k)?;
        let alphas = multi_indices(data.n(), k - 1);
        let zero = ExpRat::zero(self.context());
        let mut columns = Vec::with_capacity(self.basis.len() * alphas.len());
        for j in 0..self.basis.len() {
            for alpha in &alphas {
                let d: u32 = alpha.iter().sum();
                let col = self.derivative(j, alpha)?.lift(k - 1 - d);
                columns.push(col.numerator().to_vec(&zero));
            }
        }
        if columns.len() != space.dimension() {
            return Err(CoreError::GenericityFailure(format!(
                "grade {k}: {} generators for a space of dimension {}",
                columns.len(),
                space.dimension()
            )));
        }
        let matrix: Matrix<ExpRat> =
            space.pivots().iter().map(|&p| columns.iter().map(|c| c[p].clone()).collect()).collect();
        let inverse = linalg::inverse(&matrix, &zero).ok_or_else(|| {
            CoreError::GenericityFailure(format!("derivatives of the basis do not span grade {k}"))
        })?;
        let sys = Arc::new(GradeSystem { space, alphas, inverse });
        self.systems.lock().expect("cache lock").insert(k, sys.clone());
        Ok(sys)
    }

    /// `Σ_j Σ_α a_jα f^(k-1-|α|) ∂^α ψ_j` for a row `(a_1, …, a_N)`.
    pub fn apply(&self, row: &[ScalarOp], k: u32) -> Result<ModuleElement> {
        if row.len() != self.basis.len() {
            return Err(CoreError::SizeMismatch(self.basis.len(), row.len()));
        }
        let n = self.basis.data().n();
        let zero_num = crate::biform::BiForm::zero(n, k, k);
        let mut acc = ModuleElement::new(self.basis.data(), zero_num)?;
        for (j, op) in row.iter().enumerate() {
            for (alpha, a) in op.terms() {
                let d: u32 = alpha.iter().sum();
                if k == 0 || d > k - 1 {
                    return Err(CoreError::OrderTooHigh { order: d as usize, grade: k as usize });
                }
                acc = acc.add(&self.derivative(j, alpha)?.lift(k - 1 - d).scale(a))?;
            }
        }
        Ok(acc)
    }

    /// The unique row `(d_1, …, d_N)` with `Σ d_j ψ_j = target`.
    pub fn expand(&self, target: &ModuleElement) -> Result<Vec<ScalarOp>> {
        target.check()?;
        let k = target.grade();
        let ctx = self.context();
        let size = self.basis.len();
        if k == 0 {
            if target.is_zero() {
                return Ok(vec![ScalarOp::zero(ctx); size]);
            }
            return Err(CoreError::NotInModule("nonzero element of grade 0".into()));
        }
        let sys = self.system(k)?;
        let zero = ExpRat::zero(ctx);
        let v = target.numerator().to_vec(&zero);
        let b: Vec<ExpRat> = sys.space.pivots().iter().map(|&p| v[p].clone()).collect();
        let x = linalg::mat_vec(&sys.inverse, &b, &zero);
        let row: Vec<ScalarOp> = (0..size)
            .map(|j| {
                let terms = sys.alphas.iter().enumerate().map(|(a, alpha)| (alpha.clone(), x[j * sys.alphas.len() + a].clone()));
                ScalarOp::from_terms(ctx, terms)
            })
            .collect::<Result<_>>()?;
        if self.apply(&row, k)?.numerator() != target.numerator() {
            return Err(CoreError::NotInModule(format!("{target} is not reproduced by its coordinates")));
        }
        Ok(row)
    }

    /// `D(λ)`: row `i` is the expansion of `λ ψ_i`.
    pub fn build(&self, lambda: &MeroFunc) -> Result<DiffOp> {
        let rows = self
            .basis
            .elements()
            .iter()
            .map(|psi| self.expand(&psi.mul_mero(lambda)?))
            .collect::<Result<Vec<_>>>()?;
        DiffOp::from_rows(self.context(), rows)
    }
}

impl OperatorBuilder {
    /// For each basis element `ψ_i`, whether row `i` of `op` applied to the
    /// basis gives `λ ψ_i`.
    pub fn eigen_relation(&self, op: &DiffOp, lambda: &MeroFunc) -> Result<Vec<bool>> {
        if op.size() != self.basis.len() {
            return Err(CoreError::SizeMismatch(self.basis.len(), op.size()));
        }
        self.basis
            .elements()
            .iter()
            .zip(op.rows())
            .map(|(psi, row)| {
                let target = psi.mul_mero(lambda)?;
                Ok(self.apply(row, target.grade())?.numerator() == target.numerator())
            })
            .collect()
    }
}

/// One-shot `D(λ)` for a basis.
pub fn build_operator(lambda: &MeroFunc, basis: &ModuleBasis) -> Result<DiffOp> {
    OperatorBuilder::new(basis.clone()).build(lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::GaussQ;
    use crate::presets;

    fn ctx() -> Arc<ExpContext> {
        ExpContext::new(vec![GaussQ::one(), GaussQ::from_int(-1)])
    }

    #[test]
    fn derivation_rule() {
        let k = ctx();
        let dx = DiffOp::scalar(ScalarOp::partial(&k, 0).unwrap(), 1);
        let q = DiffOp::scalar(ScalarOp::constant(ExpRat::q(&k)), 1);
        let c = dx.commutator(&q).unwrap();
        assert_eq!(c, q);
        assert_eq!(DiffOp::identity(&k, 1).compose(&dx).unwrap(), dx);
    }

    #[test]
    fn leibniz_second_order() {
        // ∂x² ∘ q = q ∂x² + 2 q ∂x + q with c_x = 1.
        let k = ctx();
        let dxx = ScalarOp::monomial(vec![2, 0], ExpRat::one(&k));
        let got = dxx.compose(&ScalarOp::constant(ExpRat::q(&k))).unwrap();
        let want = ScalarOp::parse("q*dx^2 + 2*q*dx + q", &k).unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn text_round_trip() {
        let k = ctx();
        let op = ScalarOp::parse("1/4*(dy^2 - dx^2) + (1+q)/(1-q)*dx - 3", &k).unwrap();
        assert_eq!(ScalarOp::parse(&op.to_text(true), &k).unwrap(), op);
        assert_eq!(ScalarOp::parse(&op.to_text(false), &k).unwrap(), op);
    }

    #[test]
    fn expand_basis_and_derivatives() {
        let (data, basis, _) = presets::load("gamma-n2").unwrap();
        let b = OperatorBuilder::new(basis.clone());
        let k = data.context();
        let row = b.expand(&basis.elements()[1]).unwrap();
        assert_eq!(row, vec![ScalarOp::zero(k), ScalarOp::one(k)]);
        let row = b.expand(&basis.elements()[0].derive(0).unwrap()).unwrap();
        assert_eq!(row, vec![ScalarOp::partial(k, 0).unwrap(), ScalarOp::zero(k)]);
    }

    #[test]
    fn first_operator_of_each_preset() {
        let (data, basis, lambdas) = presets::load("gamma-n2").unwrap();
        let k = data.context();
        let d = build_operator(&lambdas[0], &basis).unwrap();
        let want = ScalarOp::parse("dx - dy", k).unwrap();
        assert_eq!(d, DiffOp::scalar(want, 2));

        let (data, basis, lambdas) = presets::load("omega").unwrap();
        let k = data.context();
        let d = build_operator(&lambdas[0], &basis).unwrap();
        let want = ScalarOp::parse("1/4*(dx + dy)", k).unwrap();
        assert_eq!(d, DiffOp::scalar(want, 2));
    }
}
