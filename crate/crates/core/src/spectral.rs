//! Spectral data for `Γ` and `Ω`: identity checks, flow spaces and the
//! genericity conditions the freeness of the module depends on.
//!
//! `Γ` glues `(1:0, t) ~ (0:1, P t)` inside `CP^1 × CP^(n-1)`; `Ω` glues
//! `(1:0, t) ~ (t, 0:1)` inside `CP^1 × CP^1`.

use std::fmt;
use std::sync::Arc;

use crate::biform::{monomials, BiForm, MatrixP};
use crate::error::{CoreError, Result};
use crate::field::{ExpContext, ExpRat, Field, GaussQ, UPoly};
use crate::linalg;
use crate::module;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Variety {
    Gamma,
    Omega,
}

impl fmt::Display for Variety {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variety::Gamma => "gamma",
            Variety::Omega => "omega",
        })
    }
}

/// A bidegree-(1,1) form with its exponent constant.
#[derive(Clone, PartialEq, Debug)]
pub struct FlowForm {
    pub form: BiForm<GaussQ>,
    pub c: GaussQ,
}

#[derive(Clone, PartialEq, Debug)]
pub struct GammaData {
    pub p: MatrixP,
    pub a: GaussQ,
    pub lambda: GaussQ,
    pub f: BiForm<GaussQ>,
    pub flows: Vec<FlowForm>,
}

#[derive(Clone, PartialEq, Debug)]
pub struct OmegaData {
    pub b: GaussQ,
    pub lambda: GaussQ,
    pub g: BiForm<GaussQ>,
    pub flows: Vec<FlowForm>,
}

#[derive(Clone, PartialEq, Debug)]
pub enum Gluing {
    Gamma { p: MatrixP, a: GaussQ },
    Omega { b: GaussQ },
}

/// Validated-shape spectral datum of either variety, with its exponential
/// context `q = exp(Σ c_j x_j)`.
#[derive(Clone, Debug)]
pub struct SpectralData {
    gluing: Gluing,
    lambda: GaussQ,
    f: BiForm<GaussQ>,
    flows: Vec<FlowForm>,
    ctx: Arc<ExpContext>,
}

fn check_shape(n: usize, f: &BiForm<GaussQ>, flows: &[FlowForm], name: &str) -> Result<()> {
    for (label, form) in std::iter::once((name.to_string(), f))
        .chain(flows.iter().enumerate().map(|(i, fl)| (format!("{name}{}", i + 1), &fl.form)))
    {
        if form.n() != n || form.bidegree() != (1, 1) {
            return Err(CoreError::ArityMismatch(format!(
                "{label} must have bidegree (1, 1) in {n} t-variables"
            )));
        }
    }
    if flows.len() != n {
        return Err(CoreError::ArityMismatch(format!("expected {n} flow forms, got {}", flows.len())));
    }
    Ok(())
}

impl SpectralData {
    pub fn gamma(d: GammaData) -> Result<Arc<SpectralData>> {
        let n = d.p.n();
        check_shape(n, &d.f, &d.flows, "f")?;
        if d.a.is_zero() {
            return Err(CoreError::PreconditionViolated("A must be nonzero".into()));
        }
        let ctx = ExpContext::new(d.flows.iter().map(|fl| fl.c.clone()).collect());
        Ok(Arc::new(SpectralData {
            gluing: Gluing::Gamma { p: d.p, a: d.a },
            lambda: d.lambda,
            f: d.f,
            flows: d.flows,
            ctx,
        }))
    }

    pub fn omega(d: OmegaData) -> Result<Arc<SpectralData>> {
        check_shape(2, &d.g, &d.flows, "g")?;
        if d.b.is_zero() {
            return Err(CoreError::PreconditionViolated("B must be nonzero".into()));
        }
        let ctx = ExpContext::new(d.flows.iter().map(|fl| fl.c.clone()).collect());
        Ok(Arc::new(SpectralData { gluing: Gluing::Omega { b: d.b }, lambda: d.lambda, f: d.g, flows: d.flows, ctx }))
    }

    pub fn variety(&self) -> Variety {
        match self.gluing {
            Gluing::Gamma { .. } => Variety::Gamma,
            Gluing::Omega { .. } => Variety::Omega,
        }
    }

    pub fn gluing(&self) -> &Gluing {
        &self.gluing
    }

    /// Number of spatial variables, equal to the rank of the module.
    pub fn n(&self) -> usize {
        self.f.n()
    }

    pub fn lambda(&self) -> &GaussQ {
        &self.lambda
    }

    /// The pole form (`f` on `Γ`, `g` on `Ω`).
    pub fn f(&self) -> &BiForm<GaussQ> {
        &self.f
    }

    pub fn flows(&self) -> &[FlowForm] {
        &self.flows
    }

    pub fn context(&self) -> &Arc<ExpContext> {
        &self.ctx
    }

    /// `A` on `Γ`, `B` on `Ω`.
    pub fn scale(&self) -> &GaussQ {
        match &self.gluing {
            Gluing::Gamma { a, .. } => a,
            Gluing::Omega { b } => b,
        }
    }

    /// Name of the second variable block in printed forms.
    pub fn block_prefix(&self) -> &'static str {
        match self.variety() {
            Variety::Gamma => "t",
            Variety::Omega => "w",
        }
    }

    /// The glued partner of `h(1, 0, t)`: `h(0, 1, P t)` on `Γ`, `h(t, 0, 1)` on `Ω`.
    pub fn partner<C: Field>(&self, h: &BiForm<C>) -> Result<BiForm<C>> {
        match &self.gluing {
            Gluing::Gamma { p, .. } => h.at_second_point().subst_t(p),
            Gluing::Omega { .. } => Ok(h.swap_factors()?.at_second_point()),
        }
    }

    /// `h(1,0,t) - s · partner(h)`.
    pub fn gluing_residual<C: Field>(&self, h: &BiForm<C>, s: &C) -> Result<BiForm<C>> {
        h.at_first_point().sub(&self.partner(h)?.scale(s))
    }

    pub fn to_gamma(&self) -> Option<GammaData> {
        match &self.gluing {
            Gluing::Gamma { p, a } => Some(GammaData {
                p: p.clone(),
                a: a.clone(),
                lambda: self.lambda.clone(),
                f: self.f.clone(),
                flows: self.flows.clone(),
            }),
            Gluing::Omega { .. } => None,
        }
    }

    pub fn to_omega(&self) -> Option<OmegaData> {
        match &self.gluing {
            Gluing::Omega { b } => Some(OmegaData {
                b: b.clone(),
                lambda: self.lambda.clone(),
                g: self.f.clone(),
                flows: self.flows.clone(),
            }),
            Gluing::Gamma { .. } => None,
        }
    }

    /// Checks the gluing identities of the pole form and of every flow form.
    pub fn check_identities(&self) -> Result<()> {
        let (name, s) = match self.variety() {
            Variety::Gamma => ("f", "A"),
            Variety::Omega => ("g", "B"),
        };
        let partner = match self.variety() {
            Variety::Gamma => "(0,1,P t)",
            Variety::Omega => "(t,0,1)",
        };
        let f1 = self.f.at_first_point();
        expect_zero(
            &self.gluing_residual(&self.f, self.scale())?,
            &format!("{name}(1,0,t) = {s}·{name}{partner}"),
            self.block_prefix(),
        )?;
        for (i, fl) in self.flows.iter().enumerate() {
            let r = self.gluing_residual(&fl.form, self.scale())?.sub(&f1.scale(&fl.c))?;
            expect_zero(
                &r,
                &format!("{name}{k}(1,0,t) - {s}·{name}{k}{partner} = c{k}·{name}(1,0,t)", k = i + 1),
                self.block_prefix(),
            )?;
        }
        Ok(())
    }

    /// Basis of all `(form, c)` satisfying the flow identity for this pole form.
    pub fn flow_space(&self) -> Result<Vec<FlowForm>> {
        let r = self.gluing_residual(&self.f, self.scale())?;
        if !r.is_zero() {
            return Err(violation(&r, "pole form gluing identity", self.block_prefix()));
        }
        let n = self.n();
        let monos = monomials(n, 1, 1);
        let rows = monomials(n, 0, 1);
        let f1 = self.f.at_first_point();
        let mut cols: Vec<Vec<GaussQ>> = monos
            .iter()
            .map(|m| {
                let unit = BiForm::from_terms(n, 1, 1, [(m.clone(), GaussQ::one())]).expect("valid monomial");
                let res = self.gluing_residual(&unit, self.scale()).expect("shape checked");
                res.to_vec(&GaussQ::zero())
            })
            .collect();
        cols.push(f1.neg().to_vec(&GaussQ::zero()));
        let matrix: Vec<Vec<GaussQ>> =
            (0..rows.len()).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
        let kernel = linalg::kernel(&matrix, monos.len() + 1, &GaussQ::zero());
        kernel
            .into_iter()
            .map(|v| {
                let form = BiForm::from_vec(n, 1, 1, &v[..monos.len()])?;
                Ok(FlowForm { form, c: v[monos.len()].clone() })
            })
            .collect()
    }
}

fn violation<C: Field>(r: &BiForm<C>, identity: &str, prefix: &str) -> CoreError {
    let (m, c) = r.terms().iter().next().expect("nonzero residual");
    let mono = BiForm::from_terms(r.n(), r.dz(), r.dt(), [(m.clone(), c.one_like())])
        .expect("valid monomial")
        .display_with(prefix);
    CoreError::IdentityViolation { identity: identity.to_string(), monomial: mono }
}

fn expect_zero<C: Field>(r: &BiForm<C>, identity: &str, prefix: &str) -> Result<()> {
    if r.is_zero() {
        Ok(())
    } else {
        Err(violation(r, identity, prefix))
    }
}

/// Basis of the solutions `(form, c)` of the `Γ` flow identity.
pub fn solve_flow_space(f: &BiForm<GaussQ>, p: &MatrixP, a: &GaussQ) -> Result<Vec<FlowForm>> {
    let n = p.n();
    let placeholder = (0..n).map(|_| FlowForm { form: f.clone(), c: GaussQ::zero() }).collect();
    let data = SpectralData::gamma(GammaData {
        p: p.clone(),
        a: a.clone(),
        lambda: GaussQ::one(),
        f: f.clone(),
        flows: placeholder,
    })?;
    data.flow_space()
}

/// Basis of the solutions `(form, c)` of the `Ω` flow identity.
pub fn solve_flow_space_omega(g: &BiForm<GaussQ>, b: &GaussQ) -> Result<Vec<FlowForm>> {
    let placeholder = (0..2).map(|_| FlowForm { form: g.clone(), c: GaussQ::zero() }).collect();
    let data =
        SpectralData::omega(OmegaData { b: b.clone(), lambda: GaussQ::one(), g: g.clone(), flows: placeholder })?;
    data.flow_space()
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Condition {
    DistinctEigenvalues,
    NonvanishingOnEigenvectors,
    /// Squarefree `Δ_j` (1-based `j`).
    DeltaDiscriminant(usize),
    Independence,
    CornerNonzero,
    /// `g = 0` and `g_i = 0` meet in two distinct points (1-based `i`).
    DistinctIntersections(usize),
    /// Basis values at the intersection points of `g = 0`, `g_i = 0` are independent.
    DeterminantNonzero(usize),
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::DistinctEigenvalues => write!(f, "eigenvalues of P are pairwise distinct"),
            Condition::NonvanishingOnEigenvectors => write!(f, "f(1,0,w) != 0 for every eigenvector w of P"),
            Condition::DeltaDiscriminant(j) => write!(f, "Delta_{j} has no multiple roots"),
            Condition::Independence => write!(f, "pole form and flow forms are linearly independent"),
            Condition::CornerNonzero => write!(f, "g(0,1,0,1) != 0"),
            Condition::DistinctIntersections(i) => write!(f, "g = 0 and g{i} = 0 meet in two distinct points"),
            Condition::DeterminantNonzero(i) => {
                write!(f, "basis determinant at the points g = g{i} = 0 is not identically zero")
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Check {
    pub condition: Condition,
    pub passed: bool,
}

/// Exact outcome of every genericity condition, in evaluation order.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct GenericityReport {
    pub checks: Vec<Check>,
}

impl GenericityReport {
    fn push(&mut self, condition: Condition, passed: bool) {
        self.checks.push(Check { condition, passed });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<Condition> {
        self.checks.iter().find(|c| !c.passed).map(|c| c.condition)
    }

    fn get(&self, cond: Condition) -> Option<bool> {
        self.checks.iter().find(|c| c.condition == cond).map(|c| c.passed)
    }

    pub fn eigenvalues_distinct(&self) -> Option<bool> {
        self.get(Condition::DistinctEigenvalues)
    }

    pub fn f_nonvanishing_on_eigenvectors(&self) -> Option<bool> {
        self.get(Condition::NonvanishingOnEigenvectors)
    }

    pub fn delta_discriminants_nonzero(&self) -> Vec<bool> {
        self.checks
            .iter()
            .filter(|c| matches!(c.condition, Condition::DeltaDiscriminant(_)))
            .map(|c| c.passed)
            .collect()
    }

    pub fn independence(&self) -> Option<bool> {
        self.get(Condition::Independence)
    }

    /// `Ok` if every condition holds, else the first failing one.
    pub fn ensure(&self) -> Result<()> {
        match self.first_failure() {
            None => Ok(()),
            Some(c) => Err(CoreError::GenericityFailure(c.to_string())),
        }
    }
}

/// `(c_0, …, c_n)` and adjugate terms `M_k` with
/// `det(λI - P) = Σ c_i λ^i` and `adj(λI - P) = Σ_k M_k λ^(n-k)`.
fn faddeev_leverrier(p: &MatrixP) -> (UPoly, Vec<Vec<Vec<GaussQ>>>) {
    let n = p.n();
    let zero = GaussQ::zero();
    let matmul = |a: &[Vec<GaussQ>], b: &[Vec<GaussQ>]| -> Vec<Vec<GaussQ>> {
        (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| (0..n).fold(zero.clone(), |acc, k| &acc + &(&a[r][k] * &b[k][c])))
                    .collect()
            })
            .collect()
    };
    let mut coeffs = vec![GaussQ::zero(); n + 1];
    coeffs[n] = GaussQ::one();
    let mut m_prev = vec![vec![zero.clone(); n]; n];
    let mut ms = Vec::with_capacity(n);
    for k in 1..=n {
        let mut m = matmul(p.rows(), &m_prev);
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = &row[i] + &coeffs[n - k + 1];
        }
        let am = matmul(p.rows(), &m);
        let tr = (0..n).fold(zero.clone(), |acc, i| &acc + &am[i][i]);
        coeffs[n - k] = -&(&tr * &GaussQ::ratio(1, k as i64));
        ms.push(m.clone());
        m_prev = m;
    }
    (UPoly::new(coeffs), ms)
}

/// Characteristic polynomial `det(λI - P)`.
pub fn char_poly(p: &MatrixP) -> UPoly {
    faddeev_leverrier(p).0
}

/// Whether `P` has pairwise distinct eigenvalues.
pub fn eigenvalues_distinct(p: &MatrixP) -> bool {
    char_poly(p).is_squarefree()
}

/// Whether `f(1,0,w) ≠ 0` on every eigenvector `w` of `P`.
///
/// At a simple eigenvalue the adjugate of `λI - P` has rank one with columns
/// along the eigenvector, so `f(1,0,·)` kills the eigenvector exactly when
/// every `f(1,0, adj(λI - P) e_m)` vanishes there. The test is therefore
/// `gcd(χ_P, g_1, …, g_n) = 1`.
pub fn check_condition5(f: &BiForm<GaussQ>, p: &MatrixP) -> Result<bool> {
    let n = p.n();
    let (chi, ms) = faddeev_leverrier(p);
    if !chi.is_squarefree() {
        return Err(CoreError::PreconditionViolated("eigenvalues of P are not distinct".into()));
    }
    let f1 = f.at_first_point();
    let alpha: Vec<GaussQ> = f1.to_vec(&GaussQ::zero());
    // t_exponents lists e_1 first, so alpha[i] is the coefficient of t_(i+1).
    let mut g = chi.clone();
    for m in 0..n {
        let mut coeffs = vec![GaussQ::zero(); n];
        for (k, mk) in ms.iter().enumerate() {
            let v = (0..n).fold(GaussQ::zero(), |acc, i| &acc + &(&alpha[i] * &mk[i][m]));
            coeffs[n - 1 - k] = v;
        }
        g = g.gcd(&UPoly::new(coeffs));
        if g.is_one() {
            return Ok(true);
        }
    }
    Ok(g.is_one())
}

/// Discriminant of the binary form `Σ coeffs[k] z1^k z2^(d-k)` of degree
/// `d = coeffs.len() - 1`, up to a nonzero constant. Vanishes exactly when the
/// form has a repeated root on `CP^1` (or is identically zero).
pub fn binary_discriminant(coeffs: &[GaussQ]) -> GaussQ {
    let d = coeffs.len().saturating_sub(1);
    if coeffs.iter().all(GaussQ::is_zero) {
        return GaussQ::zero();
    }
    if d <= 1 {
        return GaussQ::one();
    }
    let lead = &coeffs[d];
    if lead.is_zero() {
        // Root at (1:0); a second one there makes the discriminant vanish.
        let next = &coeffs[d - 1];
        return &(next * next) * &binary_discriminant(&coeffs[..d]);
    }
    let p = UPoly::new(coeffs.to_vec());
    p.resultant(&p.derivative())
}

/// `Δ_j` for each `j`: determinant of the matrix of `z`-linear forms given
/// by `{f, f_1, …, f_n} \ {f_j}`, as coefficients of `z1^k z2^(n-k)`.
pub fn delta_forms(d: &GammaData) -> Vec<Vec<GaussQ>> {
    let n = d.p.n();
    let forms: Vec<&BiForm<GaussQ>> = std::iter::once(&d.f).chain(d.flows.iter().map(|fl| &fl.form)).collect();
    let xs: Vec<GaussQ> = (0..=n as i64).map(GaussQ::from_int).collect();
    (1..=n)
        .map(|j| {
            let rows: Vec<&BiForm<GaussQ>> =
                forms.iter().enumerate().filter(|(i, _)| *i != j).map(|(_, f)| *f).collect();
            let ys: Vec<GaussQ> = xs
                .iter()
                .map(|s| {
                    let z = (s.clone(), GaussQ::one());
                    let m: Vec<Vec<GaussQ>> =
                        rows.iter().map(|f| f.restrict_z(&z).to_vec(&GaussQ::zero())).collect();
                    linalg::determinant(&m, &GaussQ::zero())
                })
                .collect();
            let p = UPoly::interpolate(&xs, &ys).expect("distinct nodes");
            (0..=n).map(|k| p.coeff(k)).collect()
        })
        .collect()
}

pub fn check_delta_discriminants(d: &GammaData) -> Vec<bool> {
    delta_forms(d).iter().map(|c| !binary_discriminant(c).is_zero()).collect()
}

fn independence(f: &BiForm<GaussQ>, flows: &[FlowForm]) -> bool {
    let rows: Vec<Vec<GaussQ>> = std::iter::once(f)
        .chain(flows.iter().map(|fl| &fl.form))
        .map(|b| b.to_vec(&GaussQ::zero()))
        .collect();
    linalg::rank(&rows) == rows.len()
}

/// Evaluates the genericity conditions of a `Γ` datum. Fails only if an
/// identity is violated; genericity outcomes are reported, not raised.
pub fn gamma_report(d: &GammaData) -> Result<GenericityReport> {
    let data = SpectralData::gamma(d.clone())?;
    data.check_identities()?;
    let mut report = GenericityReport::default();
    let distinct = eigenvalues_distinct(&d.p);
    report.push(Condition::DistinctEigenvalues, distinct);
    report.push(Condition::NonvanishingOnEigenvectors, distinct && check_condition5(&d.f, &d.p)?);
    for (j, ok) in check_delta_discriminants(d).into_iter().enumerate() {
        report.push(Condition::DeltaDiscriminant(j + 1), ok);
    }
    report.push(Condition::Independence, independence(&d.f, &d.flows));
    Ok(report)
}

pub fn validate_gamma(d: &GammaData) -> Result<GenericityReport> {
    let report = gamma_report(d)?;
    report.ensure()?;
    Ok(report)
}

/// Coefficients of the `z1` and `z2` parts of a bidegree-(1,1) form as
/// linear forms in `w`.
fn z_parts<C: Field>(h: &BiForm<C>) -> (BiForm<C>, BiForm<C>) {
    (h.at_first_point(), h.at_second_point())
}

/// Binary quadratic in `w` whose roots are the `w`-coordinates of the points
/// where `g = 0` meets `g_i = 0`: the resultant of the two forms in `z`.
pub fn intersection_quadratic(g: &BiForm<GaussQ>, gi: &BiForm<GaussQ>) -> BiForm<GaussQ> {
    let (l1, l2) = z_parts(g);
    let (m1, m2) = z_parts(gi);
    l1.mul(&m2).expect("same arity").sub(&l2.mul(&m1).expect("same arity")).expect("same shape")
}

fn quadratic_coeffs<C: Field>(q: &BiForm<C>, zero: &C) -> Vec<C> {
    // canonical order: w1^2, w1 w2, w2^2
    q.to_vec(zero)
}

/// Evaluates the genericity conditions of an `Ω` datum.
///
/// Substituting `z = (L2(w) : -L1(w))` parametrizes `g = 0`; the intersection
/// with `g_i = 0` is then the pair of roots of `R = L1 M2 - L2 M1`. For a
/// grade-1 basis `h_1, h_2` put `H_k(w) = h_k(L2, -L1, w)`. The 2×2 basis
/// determinant at the two points vanishes iff some `a H_1 + b H_2` vanishes at
/// both roots, i.e. iff `H_1, H_2, R` are dependent; so the condition is the
/// 3×3 determinant of their coefficients, an element of `K`.
pub fn omega_report(d: &OmegaData) -> Result<GenericityReport> {
    let data = SpectralData::omega(d.clone())?;
    let mut report = GenericityReport::default();
    let corner = d.g.eval(&(GaussQ::zero(), GaussQ::one()), &[GaussQ::zero(), GaussQ::one()], &GaussQ::zero());
    report.push(Condition::CornerNonzero, !corner.is_zero());
    if corner.is_zero() {
        return Ok(report);
    }
    data.check_identities()?;
    report.push(Condition::Independence, independence(&d.g, &d.flows));

    let (l1, l2) = z_parts(&d.g);
    let g_det = {
        let a = l1.to_vec(&GaussQ::zero());
        let b = l2.to_vec(&GaussQ::zero());
        &(&a[0] * &b[1]) - &(&a[1] * &b[0])
    };
    let ctx = data.context().clone();
    let zero = ExpRat::zero(&ctx);
    let basis = if report.passed() { Some(module::grade_basis(&data, 1)?) } else { None };
    for (i, fl) in d.flows.iter().enumerate() {
        let r = intersection_quadratic(&d.g, &fl.form);
        let rc = quadratic_coeffs(&r, &GaussQ::zero());
        let distinct = !g_det.is_zero() && !binary_discriminant(&rc).is_zero();
        report.push(Condition::DistinctIntersections(i + 1), distinct);
        let det_ok = match (&basis, distinct) {
            (Some(space), true) => {
                let l1e = l1.to_exprat(&ctx);
                let l2e = l2.to_exprat(&ctx);
                let mut rows: Vec<Vec<ExpRat>> = space
                    .elements()
                    .iter()
                    .map(|e| {
                        let (a, b) = z_parts(e.numerator());
                        let hk = l2e.mul(&a).and_then(|x| x.sub(&l1e.mul(&b)?)).expect("same shape");
                        quadratic_coeffs(&hk, &zero)
                    })
                    .collect();
                rows.push(rc.iter().map(|c| ExpRat::constant(&ctx, c.clone())).collect());
                !linalg::determinant(&rows, &zero).is_zero()
            }
            _ => false,
        };
        report.push(Condition::DeterminantNonzero(i + 1), det_ok);
    }
    Ok(report)
}

pub fn validate_omega(d: &OmegaData) -> Result<GenericityReport> {
    let report = omega_report(d)?;
    report.ensure()?;
    Ok(report)
}

/// Report for either variety.
pub fn report(data: &SpectralData) -> Result<GenericityReport> {
    match (data.to_gamma(), data.to_omega()) {
        (Some(g), _) => gamma_report(&g),
        (_, Some(o)) => omega_report(&o),
        _ => unreachable!("data is one of the two varieties"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    fn g(s: &str) -> GaussQ {
        s.parse().unwrap()
    }

    #[test]
    fn gamma_preset_passes() {
        let d = presets::gamma_n2().to_gamma().unwrap();
        let r = validate_gamma(&d).unwrap();
        assert_eq!(r.delta_discriminants_nonzero(), vec![true, true]);
    }

    #[test]
    fn repeated_eigenvalue() {
        let mut d = presets::gamma_n2().to_gamma().unwrap();
        d.p = MatrixP::identity(2);
        // f(1,0,t) = A f(0,1,t) fails for the identity, so rebuild a compatible f.
        d.f = BiForm::parse("z1*t1 + z2*t1", 2, None).unwrap();
        d.flows = solve_flow_space(&d.f, &d.p, &d.a).unwrap()[..2].to_vec();
        let err = validate_gamma(&d).unwrap_err();
        assert_eq!(err, CoreError::GenericityFailure(Condition::DistinctEigenvalues.to_string()));
    }

    #[test]
    fn condition5_by_direct_evaluation() {
        let d = presets::gamma_n2().to_gamma().unwrap();
        assert!(check_condition5(&d.f, &d.p).unwrap());
        for w in [[1, 1], [1, -1]] {
            let v = d.f.eval(&(GaussQ::one(), GaussQ::zero()), &w.map(GaussQ::from_int), &GaussQ::zero());
            assert!(!v.is_zero());
        }
        let p = MatrixP::from_row_major(2, &[g("1"), g("0"), g("0"), g("2")]).unwrap();
        let f = BiForm::parse("2*z1*t2 + z2*t2", 2, None).unwrap();
        assert!(!check_condition5(&f, &p).unwrap());
        let zero_at_first = BiForm::parse("z2*t1", 2, None).unwrap();
        assert!(!check_condition5(&zero_at_first, &p).unwrap());
        assert!(check_condition5(&f, &MatrixP::identity(2)).is_err());
    }

    #[test]
    fn discriminants() {
        // z1^2 + 2 z1 z2 + z2^2
        assert!(binary_discriminant(&[g("1"), g("2"), g("1")]).is_zero());
        // z1 z2: simple roots at both ends
        assert!(!binary_discriminant(&[g("0"), g("1"), g("0")]).is_zero());
        // z2^2: double root at (1:0)
        assert!(binary_discriminant(&[g("1"), g("0"), g("0")]).is_zero());
    }

    #[test]
    fn flow_space_dimension() {
        let d = presets::gamma_n2().to_gamma().unwrap();
        let space = solve_flow_space(&d.f, &d.p, &d.a).unwrap();
        assert_eq!(space.len(), 3);
        assert!(solve_flow_space(&d.f, &d.p, &g("2")).is_err());
    }

    #[test]
    fn omega_preset_passes() {
        let d = presets::omega().to_omega().unwrap();
        let r = validate_omega(&d).unwrap();
        assert!(r.checks.iter().any(|c| c.condition == Condition::DeterminantNonzero(2)));
        assert_eq!(solve_flow_space_omega(&d.g, &d.b).unwrap().len(), 3);
    }

    #[test]
    fn omega_corner() {
        let mut d = presets::omega().to_omega().unwrap();
        d.g = BiForm::parse("z1*w1 + z1*w2", 2, None).unwrap();
        let err = validate_omega(&d).unwrap_err();
        assert_eq!(err, CoreError::GenericityFailure(Condition::CornerNonzero.to_string()));
    }

    #[test]
    fn omega_intersections_of_first_flow() {
        // g = g1 = 0 meets at w2/w1 = ±1/√2: R is proportional to 2 w2^2 - w1^2.
        let d = presets::omega().to_omega().unwrap();
        let r = intersection_quadratic(&d.g, &d.flows[0].form).to_vec(&GaussQ::zero());
        assert_eq!(r, vec![GaussQ::from_int(2), GaussQ::zero(), GaussQ::from_int(-1)]);
    }

    #[test]
    fn three_dimensional_preset() {
        let d = presets::gamma_n3().to_gamma().unwrap();
        validate_gamma(&d).unwrap();
        assert_eq!(solve_flow_space(&d.f, &d.p, &d.a).unwrap().len(), 4);
    }

    #[test]
    fn duplicated_flows_fail_delta() {
        let mut d = presets::gamma_n3().to_gamma().unwrap();
        d.flows[2] = d.flows[1].clone();
        let r = gamma_report(&d).unwrap();
        assert_eq!(r.delta_discriminants_nonzero(), vec![false, true, true]);
    }

    #[test]
    fn square_delta() {
        // det(f, 3 f1 + f2) = -2 (z1 - i z2)^2 by hand.
        let mut d = presets::gamma_n2().to_gamma().unwrap();
        let form = d.flows[0].form.scale(&GaussQ::from_int(3)).add(&d.flows[1].form).unwrap();
        d.flows[0] = FlowForm { form, c: &GaussQ::from_int(-4) * &GaussQ::i() };
        let deltas = delta_forms(&d);
        assert_eq!(deltas[1], vec![GaussQ::from_int(2), &GaussQ::from_int(4) * &GaussQ::i(), GaussQ::from_int(-2)]);
        let r = gamma_report(&d).unwrap();
        assert_eq!(r.delta_discriminants_nonzero(), vec![true, false]);
        assert_eq!(r.first_failure(), Some(Condition::DeltaDiscriminant(2)));
    }
}
