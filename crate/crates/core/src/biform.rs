//! Bihomogeneous forms in `(z1, z2)` and `(t1, …, tn)`.
//!
//! A form of bidegree `(dz, dt)` is `Σ h[j, α] · z1^j · z2^(dz-j) · t^α` with
//! `|α| = dt`. The second block is printed as `t` for `Γ` and `w` for `Ω`;
//! the parser accepts either name.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{CoreError, Result};
use crate::field::{ExpContext, ExpRat, Field, GaussQ};
use crate::linalg;
use crate::parse;
use crate::poly::{gauss_piece, join_signed, SparsePoly};

/// Monomial `z1^j z2^(dz-j) t^α`.
///
/// Ordered by `j` descending, then `α` descending lexicographically; this is
/// the column order of every linear system built from forms.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mono {
    pub j: u32,
    pub alpha: Vec<u32>,
}

impl Mono {
    pub fn new(j: u32, alpha: Vec<u32>) -> Self {
        Mono { j, alpha }
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        other.j.cmp(&self.j).then_with(|| other.alpha.cmp(&self.alpha))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All exponent vectors of length `n` and total degree `d`, descending lex.
pub fn t_exponents(n: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 1 {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for a in (0..=d).rev() {
            prefix.push(a);
            rec(n - 1, d - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(n, d, &mut Vec::with_capacity(n), &mut out);
    out
}

/// All monomials of bidegree `(dz, dt)` in canonical order.
pub fn monomials(n: usize, dz: u32, dt: u32) -> Vec<Mono> {
    let alphas = t_exponents(n, dt);
    (0..=dz)
        .rev()
        .flat_map(|j| alphas.iter().map(move |a| Mono::new(j, a.clone())))
        .collect()
}

/// `C(a, b)` as `usize`.
pub fn binomial(a: usize, b: usize) -> usize {
    if b > a {
        return 0;
    }
    let b = b.min(a - b);
    (0..b).fold(1usize, |acc, i| acc * (a - i) / (i + 1))
}

/// Nondegenerate linear map `t ↦ M·t` of `C^n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MatrixP {
    rows: Vec<Vec<GaussQ>>,
}

impl MatrixP {
    pub fn new(rows: Vec<Vec<GaussQ>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(CoreError::ArityMismatch(format!("matrix must be square and nonempty, got {n} rows")));
        }
        let m = MatrixP { rows };
        if m.determinant().is_zero() {
            return Err(CoreError::PreconditionViolated("gluing matrix is singular".into()));
        }
        Ok(m)
    }

    /// Builds an `n×n` matrix from row-major entries.
    pub fn from_row_major(n: usize, entries: &[GaussQ]) -> Result<Self> {
        if entries.len() != n * n {
            return Err(CoreError::ArityMismatch(format!(
                "expected {} matrix entries, got {}",
                n * n,
                entries.len()
            )));
        }
        MatrixP::new(entries.chunks(n).map(<[GaussQ]>::to_vec).collect())
    }

    pub fn identity(n: usize) -> Self {
        MatrixP {
            rows: (0..n)
                .map(|r| (0..n).map(|c| if r == c { GaussQ::one() } else { GaussQ::zero() }).collect())
                .collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<GaussQ>] {
        &self.rows
    }

    pub fn entry(&self, r: usize, c: usize) -> &GaussQ {
        &self.rows[r][c]
    }

    pub fn determinant(&self) -> GaussQ {
        linalg::determinant(&self.rows, &GaussQ::zero())
    }

    pub fn inverse(&self) -> MatrixP {
        let rows = linalg::inverse(&self.rows, &GaussQ::zero()).expect("checked nonsingular at construction");
        MatrixP { rows }
    }

    pub fn transpose(&self) -> MatrixP {
        let n = self.n();
        MatrixP { rows: (0..n).map(|c| (0..n).map(|r| self.rows[r][c].clone()).collect()).collect() }
    }

    pub fn apply(&self, v: &[GaussQ]) -> Vec<GaussQ> {
        linalg::mat_vec(&self.rows, v, &GaussQ::zero())
    }

    /// Row-major entries.
    pub fn entries(&self) -> Vec<GaussQ> {
        self.rows.iter().flatten().cloned().collect()
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct BiForm<C: Field> {
    n: usize,
    dz: u32,
    dt: u32,
    terms: BTreeMap<Mono, C>,
}

impl<C: Field> BiForm<C> {
    pub fn zero(n: usize, dz: u32, dt: u32) -> Self {
        BiForm { n, dz, dt, terms: BTreeMap::new() }
    }

    /// Collects terms, summing repeated monomials and dropping zeros.
    pub fn from_terms(n: usize, dz: u32, dt: u32, terms: impl IntoIterator<Item = (Mono, C)>) -> Result<Self> {
        let mut f = BiForm::zero(n, dz, dt);
        for (m, c) in terms {
            if m.j > dz || m.alpha.len() != n || m.alpha.iter().sum::<u32>() != dt {
                return Err(CoreError::ArityMismatch(format!(
                    "monomial (j={}, α={:?}) outside bidegree ({dz}, {dt}) with {n} t-variables",
                    m.j, m.alpha
                )));
            }
            f.accumulate(m, c);
        }
        Ok(f)
    }

    /// Coefficients listed in canonical monomial order.
    pub fn from_vec(n: usize, dz: u32, dt: u32, coeffs: &[C]) -> Result<Self> {
        let monos = monomials(n, dz, dt);
        if monos.len() != coeffs.len() {
            return Err(CoreError::ArityMismatch(format!(
                "expected {} coefficients, got {}",
                monos.len(),
                coeffs.len()
            )));
        }
        BiForm::from_terms(n, dz, dt, monos.into_iter().zip(coeffs.iter().cloned()))
    }

    fn accumulate(&mut self, m: Mono, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(old) => {
                let s = old.plus(&c);
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dz(&self) -> u32 {
        self.dz
    }

    pub fn dt(&self) -> u32 {
        self.dt
    }

    pub fn bidegree(&self) -> (u32, u32) {
        (self.dz, self.dt)
    }

    pub fn terms(&self) -> &BTreeMap<Mono, C> {
        &self.terms
    }

    pub fn coeff(&self, m: &Mono) -> Option<&C> {
        self.terms.get(m)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Dense coefficient vector in canonical monomial order.
    pub fn to_vec(&self, zero: &C) -> Vec<C> {
        monomials(self.n, self.dz, self.dt)
            .iter()
            .map(|m| self.terms.get(m).cloned().unwrap_or_else(|| zero.clone()))
            .collect()
    }

    fn same_shape(&self, rhs: &Self) -> Result<()> {
        if self.n != rhs.n || self.dz != rhs.dz || self.dt != rhs.dt {
            return Err(CoreError::ArityMismatch(format!(
                "bidegree ({}, {}) in {} variables vs ({}, {}) in {}",
                self.dz, self.dt, self.n, rhs.dz, rhs.dt, rhs.n
            )));
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.same_shape(rhs)?;
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.accumulate(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(Field::negated)
    }

    pub fn scale(&self, s: &C) -> Self {
        if s.is_zero() {
            return BiForm::zero(self.n, self.dz, self.dt);
        }
        self.map_coeffs(|c| c.times(s))
    }

    pub fn scale_gauss(&self, s: &GaussQ) -> Self {
        if s.is_zero() {
            return BiForm::zero(self.n, self.dz, self.dt);
        }
        self.map_coeffs(|c| c.scale_by(s))
    }

    /// Applies `f` to every coefficient, dropping results that vanish.
    pub fn map_coeffs<D: Field>(&self, f: impl Fn(&C) -> D) -> BiForm<D> {
        BiForm {
            n: self.n,
            dz: self.dz,
            dt: self.dt,
            terms: self
                .terms
                .iter()
                .filter_map(|(m, c)| {
                    let d = f(c);
                    (!d.is_zero()).then(|| (m.clone(), d))
                })
                .collect(),
        }
    }

    pub fn try_map_coeffs<D: Field>(&self, f: impl Fn(&C) -> Result<D>) -> Result<BiForm<D>> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let d = f(c)?;
            if !d.is_zero() {
                terms.insert(m.clone(), d);
            }
        }
        Ok(BiForm { n: self.n, dz: self.dz, dt: self.dt, terms })
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.n != rhs.n {
            return Err(CoreError::ArityMismatch(format!(
                "forms in {} and {} t-variables",
                self.n, rhs.n
            )));
        }
        let mut out = BiForm::zero(self.n, self.dz + rhs.dz, self.dt + rhs.dt);
        for (ma, a) in &self.terms {
            for (mb, b) in &rhs.terms {
                let alpha = ma.alpha.iter().zip(&mb.alpha).map(|(x, y)| x + y).collect();
                out.accumulate(Mono::new(ma.j + mb.j, alpha), a.times(b));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32, one: &C) -> Self {
        let mut acc = BiForm::from_terms(self.n, 0, 0, [(Mono::new(0, vec![0; self.n]), one.clone())])
            .expect("constant form");
        for _ in 0..k {
            acc = acc.mul(self).expect("same arity");
        }
        acc
    }

    /// Substitutes `(z1, z2) = z`, leaving a form of bidegree `(0, dt)`.
    pub fn restrict_z(&self, z: &(GaussQ, GaussQ)) -> BiForm<C> {
        let mut out = BiForm::zero(self.n, 0, self.dt);
        for (m, c) in &self.terms {
            let w = &z.0.pow(m.j) * &z.1.pow(self.dz - m.j);
            if !w.is_zero() {
                out.accumulate(Mono::new(0, m.alpha.clone()), c.scale_by(&w));
            }
        }
        out
    }

    /// `h(1, 0, t)`: the `z1^dz` part as a `t`-form.
    pub fn at_first_point(&self) -> BiForm<C> {
        self.restrict_z(&(GaussQ::one(), GaussQ::zero()))
    }

    /// `h(0, 1, t)`: the `z2^dz` part as a `t`-form.
    pub fn at_second_point(&self) -> BiForm<C> {
        self.restrict_z(&(GaussQ::zero(), GaussQ::one()))
    }

    /// Replaces `t` by `M·t`.
    pub fn subst_t(&self, m: &MatrixP) -> Result<BiForm<C>> {
        if m.n() != self.n {
            return Err(CoreError::ArityMismatch(format!(
                "{}×{} matrix on forms in {} t-variables",
                m.n(),
                m.n(),
                self.n
            )));
        }
        let n = self.n;
        let lin: Vec<SparsePoly<GaussQ>> = (0..n)
            .map(|i| {
                (0..n).fold(SparsePoly::zero(n), |acc, k| {
                    acc.add(&SparsePoly::var(n, k, GaussQ::one()).scale(m.entry(i, k)))
                })
            })
            .collect();
        let mut cache: BTreeMap<Vec<u32>, SparsePoly<GaussQ>> = BTreeMap::new();
        let mut out = BiForm::zero(n, self.dz, self.dt);
        for (mono, c) in &self.terms {
            let expanded = cache.entry(mono.alpha.clone()).or_insert_with(|| {
                mono.alpha.iter().enumerate().fold(SparsePoly::constant(n, GaussQ::one()), |acc, (i, &a)| {
                    acc.mul(&lin[i].pow(a, &GaussQ::one()))
                })
            });
            for (beta, g) in expanded.terms() {
                out.accumulate(Mono::new(mono.j, beta.clone()), c.scale_by(g));
            }
        }
        Ok(out)
    }

    /// Exchanges the `z` and `t` blocks of a form in two `t`-variables.
    pub fn swap_factors(&self) -> Result<BiForm<C>> {
        if self.n != 2 || self.dz != self.dt {
            return Err(CoreError::ArityMismatch(format!(
                "swap needs n = 2 and equal degrees, got n = {} and bidegree ({}, {})",
                self.n, self.dz, self.dt
            )));
        }
        let d = self.dz;
        let terms = self.terms.iter().map(|(m, c)| (Mono::new(m.alpha[0], vec![m.j, d - m.j]), c.clone()));
        BiForm::from_terms(2, d, d, terms)
    }

    /// Value at `(z, t)`.
    pub fn eval(&self, z: &(GaussQ, GaussQ), t: &[GaussQ], zero: &C) -> C {
        self.terms.iter().fold(zero.clone(), |acc, (m, c)| {
            let mut w = &z.0.pow(m.j) * &z.1.pow(self.dz - m.j);
            for (x, &a) in t.iter().zip(&m.alpha) {
                w = &w * &x.pow(a);
            }
            if w.is_zero() {
                acc
            } else {
                acc.plus(&c.scale_by(&w))
            }
        })
    }

    /// Text form with the second block named `prefix` (`t` or `w`).
    pub fn display_with(&self, prefix: &str) -> String {
        join_signed(self.terms.iter().map(|(m, c)| {
            let mono = mono_string(self.dz, m, prefix);
            match c.as_gauss() {
                Some(g) => gauss_piece(&g, &mono),
                None if mono.is_empty() => (false, format!("({c})")),
                None => (false, format!("({c})*{mono}")),
            }
        }))
    }
}

fn mono_string(dz: u32, m: &Mono, prefix: &str) -> String {
    let mut parts = Vec::new();
    let mut push = |name: String, e: u32| match e {
        0 => {}
        1 => parts.push(name),
        _ => parts.push(format!("{name}^{e}")),
    };
    push("z1".into(), m.j);
    push("z2".into(), dz - m.j);
    for (i, &a) in m.alpha.iter().enumerate() {
        push(format!("{prefix}{}", i + 1), a);
    }
    parts.join("*")
}

impl<C: Field> fmt::Display for BiForm<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("t"))
    }
}

/// Parser variable table: `z1, z2` then `t1..tn`, with `w1..wn` aliasing `t`.
fn form_names(n: usize) -> Vec<(String, usize)> {
    let mut names = vec![("z1".to_string(), 0), ("z2".to_string(), 1)];
    for i in 0..n {
        names.push((format!("t{}", i + 1), 2 + i));
        names.push((format!("w{}", i + 1), 2 + i));
    }
    names
}

fn from_poly<C: Field>(p: SparsePoly<C>, n: usize, bidegree: Option<(u32, u32)>) -> Result<BiForm<C>> {
    let mut shape = bidegree;
    let mut terms = Vec::new();
    for (e, c) in p.into_terms() {
        let dz = e[0] + e[1];
        let dt: u32 = e[2..].iter().sum();
        match shape {
            None => shape = Some((dz, dt)),
            Some(s) if s != (dz, dt) => {
                return Err(CoreError::Parse(format!(
                    "form is not bihomogeneous: found bidegrees {:?} and {:?}",
                    s,
                    (dz, dt)
                )))
            }
            Some(_) => {}
        }
        terms.push((Mono::new(e[0], e[2..].to_vec()), c));
    }
    let (dz, dt) = shape.ok_or_else(|| CoreError::Parse("cannot infer the bidegree of a zero form".into()))?;
    BiForm::from_terms(n, dz, dt, terms)
}

impl BiForm<GaussQ> {
    /// Parses text such as `-z1*t1 - z2*t2`. A zero form needs `bidegree`.
    pub fn parse(s: &str, n: usize, bidegree: Option<(u32, u32)>) -> Result<Self> {
        let p = parse::parse_poly_gauss(s, &form_names(n), n + 2)?;
        from_poly(p, n, bidegree)
    }

    pub fn to_exprat(&self, ctx: &Arc<ExpContext>) -> BiForm<ExpRat> {
        self.map_coeffs(|c| ExpRat::constant(ctx, c.clone()))
    }
}

impl BiForm<ExpRat> {
    /// Parses a form whose coefficients may involve `q`.
    pub fn parse_exp(s: &str, n: usize, bidegree: Option<(u32, u32)>, ctx: &Arc<ExpContext>) -> Result<Self> {
        let p = parse::parse_poly_exprat(s, &form_names(n), n + 2, ctx)?;
        from_poly(p, n, bidegree)
    }

    /// Applies `∂_{x_j}` to every coefficient.
    pub fn derive(&self, j: usize) -> Result<Self> {
        self.try_map_coeffs(|c| c.derive(j))
    }
}
