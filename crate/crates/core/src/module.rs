//! The Baker-Akhiezer module: elements `ψ = h / f^k · exp(Σ x_j f_j / f)`
//! stored by their numerators `h`, a bidegree-`(k, k)` form over `K`.
//!
//! `h` lies in the module iff `h(1,0,t) = Λ·S^k·q⁻¹·partner(h)` with `S = A`
//! on `Γ` and `S = B` on `Ω`.

use std::fmt;
use std::sync::Arc;

use crate::biform::{binomial, monomials, BiForm};
use crate::error::{CoreError, Result};
use crate::field::{ExpContext, ExpRat, GaussQ};
use crate::linalg;
use crate::mero::MeroFunc;
use crate::spectral::SpectralData;

/// `Λ·S^k·q⁻¹`, the factor in the grade-`k` gluing condition.
pub fn gluing_factor(data: &SpectralData, k: u32) -> ExpRat {
    let ctx = data.context();
    let s = data.lambda() * &data.scale().pow(k);
    ExpRat::q_pow(ctx, -1).scale(&s)
}

#[derive(Clone, Debug)]
pub struct ModuleElement {
    data: Arc<SpectralData>,
    num: BiForm<ExpRat>,
}

impl PartialEq for ModuleElement {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.data, &other.data) && self.num == other.num
    }
}

impl ModuleElement {
    /// Wraps `num`, checking bidegree and the gluing condition.
    pub fn new(data: &Arc<SpectralData>, num: BiForm<ExpRat>) -> Result<Self> {
        let (dz, dt) = num.bidegree();
        if dz != dt || num.n() != data.n() {
            return Err(CoreError::ArityMismatch(format!(
                "numerator must have bidegree (k, k) in {} t-variables, got ({dz}, {dt}) in {}",
                data.n(),
                num.n()
            )));
        }
        let r = data.gluing_residual(&num, &gluing_factor(data, dz))?;
        if !r.is_zero() {
            return Err(CoreError::NotInModule(format!(
                "{} violates the grade-{dz} gluing condition",
                num.display_with(data.block_prefix())
            )));
        }
        Ok(ModuleElement { data: data.clone(), num })
    }

    /// Parses a numerator with coefficients in `K`.
    pub fn parse(data: &Arc<SpectralData>, s: &str) -> Result<Self> {
        let num = BiForm::parse_exp(s, data.n(), None, data.context())?;
        ModuleElement::new(data, num)
    }

    fn unchecked(data: &Arc<SpectralData>, num: BiForm<ExpRat>) -> Self {
        ModuleElement { data: data.clone(), num }
    }

    pub fn data(&self) -> &Arc<SpectralData> {
        &self.data
    }

    pub fn grade(&self) -> u32 {
        self.num.dz()
    }

    pub fn numerator(&self) -> &BiForm<ExpRat> {
        &self.num
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn same_module(&self, rhs: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.data, &rhs.data) || self.data.context() == rhs.data.context() {
            Ok(())
        } else {
            Err(CoreError::ContextMismatch)
        }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.same_module(rhs)?;
        Ok(ModuleElement::unchecked(&self.data, self.num.add(&rhs.num)?))
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.same_module(rhs)?;
        Ok(ModuleElement::unchecked(&self.data, self.num.sub(&rhs.num)?))
    }

    /// Multiplication by a function of `x`.
    pub fn scale(&self, a: &ExpRat) -> Self {
        ModuleElement::unchecked(&self.data, self.num.scale(a))
    }

    /// The same function written over `f^(k+d)`.
    pub fn lift(&self, d: u32) -> Self {
        if d == 0 {
            return self.clone();
        }
        let ctx = self.data.context();
        let fd = self.data.f().pow(d, &GaussQ::one()).to_exprat(ctx);
        ModuleElement::unchecked(&self.data, self.num.mul(&fd).expect("same arity"))
    }

    /// `∂ψ/∂x_j` (0-based `j`), an element of grade `k + 1`.
    pub fn derive(&self, j: usize) -> Result<Self> {
        let n = self.data.n();
        if j >= n {
            return Err(CoreError::IndexOutOfRange { index: j, n });
        }
        let ctx = self.data.context();
        let f = self.data.f().to_exprat(ctx);
        let fj = self.data.flows()[j].form.to_exprat(ctx);
        let num = f.mul(&self.num.derive(j)?)?.add(&fj.mul(&self.num)?)?;
        Ok(ModuleElement::unchecked(&self.data, num))
    }

    /// `∂^α ψ`.
    pub fn derive_multi(&self, alpha: &[u32]) -> Result<Self> {
        let mut out = self.clone();
        for (j, &a) in alpha.iter().enumerate() {
            for _ in 0..a {
                out = out.derive(j)?;
            }
        }
        Ok(out)
    }

    /// `λ·ψ`.
    pub fn mul_mero(&self, lambda: &MeroFunc) -> Result<Self> {
        if !Arc::ptr_eq(lambda.data(), &self.data) && lambda.data().f() != self.data.f() {
            return Err(CoreError::VarietyMismatch);
        }
        let ctx = self.data.context();
        let num = self.num.mul(&lambda.numerator().to_exprat(ctx))?;
        Ok(ModuleElement::unchecked(&self.data, num))
    }

    /// Re-checks the gluing condition.
    pub fn check(&self) -> Result<()> {
        ModuleElement::new(&self.data, self.num.clone()).map(|_| ())
    }
}

impl fmt::Display for ModuleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pole = match self.data.variety() {
            crate::spectral::Variety::Gamma => "f",
            crate::spectral::Variety::Omega => "g",
        };
        write!(f, "({}) / {pole}^{}", self.num.display_with(self.data.block_prefix()), self.grade())
    }
}

/// `k · C(k+n-1, n-1)`: the dimension of the grade-`k` space of a free
/// module of rank `n`.
pub fn expected_dimension(n: usize, k: u32) -> usize {
    k as usize * binomial(k as usize + n - 1, n - 1)
}

/// Matrix of the grade-`k` gluing map: rows are `t`-monomials of degree `k`,
/// columns the monomials of bidegree `(k, k)`.
fn gluing_matrix(data: &SpectralData, k: u32) -> Result<Vec<Vec<ExpRat>>> {
    let n = data.n();
    let ctx = data.context();
    let zero = ExpRat::zero(ctx);
    let s = gluing_factor(data, k);
    let rows = monomials(n, 0, k).len();
    let cols: Vec<Vec<ExpRat>> = monomials(n, k, k)
        .into_iter()
        .map(|m| {
            let unit = BiForm::from_terms(n, k, k, [(m, ExpRat::one(ctx))])?;
            Ok(data.gluing_residual(&unit, &s)?.to_vec(&zero))
        })
        .collect::<Result<_>>()?;
    Ok((0..rows).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect())
}

/// Echelon basis of the grade-`k` space together with its free coordinates:
/// every element is determined by its coefficients at `pivots`.
#[derive(Clone, Debug)]
pub struct GradeSpace {
    k: u32,
    elements: Vec<ModuleElement>,
    pivots: Vec<usize>,
}

impl GradeSpace {
    pub fn grade(&self) -> u32 {
        self.k
    }

    pub fn elements(&self) -> &[ModuleElement] {
        &self.elements
    }

    pub fn dimension(&self) -> usize {
        self.elements.len()
    }

    /// Positions, in canonical monomial order, of the free coordinates.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates of `h` in the echelon basis.
    pub fn coordinates(&self, h: &ModuleElement) -> Result<Vec<ExpRat>> {
        if h.grade() != self.k {
            return Err(CoreError::ArityMismatch(format!("element of grade {} in grade-{} space", h.grade(), self.k)));
        }
        h.check()?;
        let ctx = h.data().context();
        let v = h.numerator().to_vec(&ExpRat::zero(ctx));
        Ok(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }
}

/// Echelon basis of grade `k`. Fails with `GenericityFailure` when the
/// dimension is not `k · C(k+n-1, n-1)`.
pub fn grade_basis(data: &Arc<SpectralData>, k: u32) -> Result<GradeSpace> {
    let n = data.n();
    let ctx = data.context();
    let zero = ExpRat::zero(ctx);
    let monos = monomials(n, k, k);
    let kernel = linalg::kernel(&gluing_matrix(data, k)?, monos.len(), &zero);
    let expected = expected_dimension(n, k);
    if kernel.len() != expected {
        return Err(CoreError::GenericityFailure(format!(
            "grade-{k} space has dimension {}, expected {expected}",
            kernel.len()
        )));
    }
    let pivots = kernel
        .iter()
        .map(|row| row.iter().position(|c| !c.is_zero()).expect("nonzero kernel vector"))
        .collect();
    let elements = kernel
        .iter()
        .map(|row| Ok(ModuleElement::unchecked(data, BiForm::from_vec(n, k, k, row)?)))
        .collect::<Result<_>>()?;
    Ok(GradeSpace { k, elements, pivots })
}

/// Free basis `ψ_1, …, ψ_n` of the module over the ring of differential
/// operators: a basis of grade 1.
#[derive(Clone, Debug)]
pub struct ModuleBasis {
    data: Arc<SpectralData>,
    elements: Vec<ModuleElement>,
}

impl ModuleBasis {
    /// The echelon basis of grade 1.
    pub fn canonical(data: &Arc<SpectralData>) -> Result<Self> {
        let space = grade_basis(data, 1)?;
        Ok(ModuleBasis { data: data.clone(), elements: space.elements })
    }

    /// A user-supplied grade-1 basis; checked for membership and independence.
    pub fn from_elements(data: &Arc<SpectralData>, elements: Vec<ModuleElement>) -> Result<Self> {
        let n = data.n();
        if elements.len() != n {
            return Err(CoreError::ArityMismatch(format!("a basis has {n} elements, got {}", elements.len())));
        }
        for e in &elements {
            if e.grade() != 1 {
                return Err(CoreError::ArityMismatch(format!("basis element {e} is not of grade 1")));
            }
            e.check()?;
        }
        let zero = ExpRat::zero(data.context());
        let rows: Vec<Vec<ExpRat>> = elements.iter().map(|e| e.numerator().to_vec(&zero)).collect();
        if linalg::rank(&rows) != n {
            return Err(CoreError::PreconditionViolated("basis elements are linearly dependent".into()));
        }
        // The grade-1 space must also have the expected dimension.
        grade_basis(data, 1)?;
        Ok(ModuleBasis { data: data.clone(), elements })
    }

    pub fn parse(data: &Arc<SpectralData>, texts: &[&str]) -> Result<Self> {
        let elements = texts.iter().map(|s| ModuleElement::parse(data, s)).collect::<Result<_>>()?;
        ModuleBasis::from_elements(data, elements)
    }

    pub fn data(&self) -> &Arc<SpectralData> {
        &self.data
    }

    pub fn context(&self) -> &Arc<ExpContext> {
        self.data.context()
    }

    pub fn elements(&self) -> &[ModuleElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}
