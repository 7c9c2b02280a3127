//! Projective models of the two varieties: `φ1: CP¹×CP^{n-1} → CP²×CP^{2n-1}`
//! and `φ2: CP¹×CP¹ → CP¹¹`, their equations and seeded probes of the
//! embedding property.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::biform::MatrixP;
use crate::error::{CoreError, Result};
use crate::field::GaussQ;
use crate::linalg;
use crate::poly::SparsePoly;

/// A point of projective space: a nonzero coordinate vector up to scale.
#[derive(Clone, Debug)]
pub struct ProjPoint {
    coords: Vec<GaussQ>,
}

impl ProjPoint {
    pub fn new(coords: Vec<GaussQ>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(CoreError::ArityMismatch(format!(
                "a projective point needs at least 2 coordinates, got {}",
                coords.len()
            )));
        }
        if coords.iter().all(GaussQ::is_zero) {
            return Err(CoreError::PreconditionViolated("projective point with all coordinates zero".into()));
        }
        Ok(ProjPoint { coords })
    }

    pub fn from_ints(coords: &[i64]) -> Result<Self> {
        ProjPoint::new(coords.iter().map(|&c| GaussQ::from_int(c)).collect())
    }

    /// Reads `"a:b:..."` with Gaussian rational entries.
    pub fn parse(s: &str) -> Result<Self> {
        ProjPoint::new(s.split(':').map(crate::parse::parse_gauss).collect::<Result<_>>()?)
    }

    pub fn coords(&self) -> &[GaussQ] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &GaussQ {
        &self.coords[i]
    }

    /// Dimension of the ambient projective space.
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    /// Scaled so that the first nonzero coordinate is 1.
    pub fn normalized(&self) -> ProjPoint {
        let lead = self.coords.iter().find(|c| !c.is_zero()).expect("nonzero point");
        let inv = lead.checked_inv().expect("nonzero");
        ProjPoint { coords: self.coords.iter().map(|c| c * &inv).collect() }
    }

    pub fn scaled(&self, s: &GaussQ) -> Result<ProjPoint> {
        ProjPoint::new(self.coords.iter().map(|c| c * s).collect())
    }

    fn is_multiple_of_basis(&self, k: usize) -> bool {
        self.coords.iter().enumerate().all(|(i, c)| i == k || c.is_zero())
    }
}

/// Projective equality: every 2×2 minor of the two coordinate vectors vanishes.
impl PartialEq for ProjPoint {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = (&self.coords, &other.coords);
        if a.len() != b.len() {
            return false;
        }
        (0..a.len()).all(|i| (i + 1..a.len()).all(|j| (&a[i] * &b[j]) == (&a[j] * &b[i])))
    }
}

impl Eq for ProjPoint {}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(":"))
    }
}

/// The operations the two maps need, so the same formulas serve numeric
/// evaluation and the polynomial Jacobian.
trait Ring: Clone {
    fn add(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn scale(&self, s: &GaussQ) -> Self;
}

impl Ring for GaussQ {
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn scale(&self, s: &GaussQ) -> Self {
        self * s
    }
}

impl Ring for SparsePoly<GaussQ> {
    fn add(&self, rhs: &Self) -> Self {
        SparsePoly::add(self, rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        SparsePoly::mul(self, rhs)
    }
    fn scale(&self, s: &GaussQ) -> Self {
        SparsePoly::scale(self, s)
    }
}

fn mono<R: Ring>(factors: &[(&R, u32)]) -> R {
    let mut acc: Option<R> = None;
    for (x, e) in factors {
        for _ in 0..*e {
            acc = Some(match acc {
                Some(a) => a.mul(x),
                None => (*x).clone(),
            });
        }
    }
    acc.expect("positive degree")
}

fn apply_matrix<R: Ring>(m: &MatrixP, t: &[R]) -> Vec<R> {
    m.rows()
        .iter()
        .map(|row| {
            let mut acc = t[0].scale(&row[0]);
            for (x, c) in t.iter().zip(row).skip(1) {
                acc = acc.add(&x.scale(c));
            }
            acc
        })
        .collect()
}

fn phi1_generic<R: Ring>(z: &[R], t: &[R], pinv: &MatrixP) -> (Vec<R>, Vec<R>) {
    let (z1, z2) = (&z[0], &z[1]);
    let u = vec![
        mono(&[(z1, 2), (z2, 1)]),
        mono(&[(z1, 1), (z2, 2)]),
        mono(&[(z1, 3)]).add(&mono(&[(z2, 3)])),
    ];
    let r = apply_matrix(pinv, t);
    let z11 = mono(&[(z1, 2)]);
    let z22 = mono(&[(z2, 2)]);
    let z12 = mono(&[(z1, 1), (z2, 1)]);
    let mut v: Vec<R> = t.iter().zip(&r).map(|(tj, rj)| z11.mul(tj).add(&z22.mul(rj))).collect();
    v.extend(t.iter().map(|tj| z12.mul(tj)));
    (u, v)
}

fn phi2_generic<R: Ring>(z: &[R], w: &[R]) -> Vec<R> {
    let (z1, z2, w1, w2) = (&z[0], &z[1], &w[0], &w[1]);
    vec![
        mono(&[(z1, 3)]).mul(&mono(&[(w1, 3)]).add(&mono(&[(w2, 3)]))).add(&mono(&[(z2, 3), (w2, 3)])),
        mono(&[(z1, 3), (w1, 2), (w2, 1)]).add(&mono(&[(z1, 2), (z2, 1), (w2, 3)])),
        mono(&[(z1, 3), (w1, 1), (w2, 2)]).add(&mono(&[(z1, 1), (z2, 2), (w2, 3)])),
        mono(&[(z1, 2), (z2, 1), (w1, 3)]),
        mono(&[(z1, 2), (z2, 1), (w1, 2), (w2, 1)]),
        mono(&[(z1, 2), (z2, 1), (w1, 1), (w2, 2)]),
        mono(&[(z1, 1), (z2, 2), (w1, 3)]),
        mono(&[(z1, 1), (z2, 2), (w1, 2), (w2, 1)]),
        mono(&[(z1, 1), (z2, 2), (w1, 1), (w2, 2)]),
        mono(&[(z2, 3), (w1, 3)]),
        mono(&[(z2, 3), (w1, 2), (w2, 1)]),
        mono(&[(z2, 3), (w1, 1), (w2, 2)]),
    ]
}

fn expect_line(p: &ProjPoint, name: &str) -> Result<()> {
    if p.dim() != 1 {
        return Err(CoreError::ArityMismatch(format!("{name} must lie in CP^1, got CP^{}", p.dim())));
    }
    Ok(())
}

/// `φ1(z, t) = (u, v)` with `u = (z1²z2 : z1z2² : z1³+z2³)` and
/// `v = (z1²t + z2²P⁻¹t : z1z2t)`.
pub fn phi1(z: &ProjPoint, t: &ProjPoint, p: &MatrixP) -> Result<(ProjPoint, ProjPoint)> {
    expect_line(z, "z")?;
    if t.coords.len() != p.n() {
        return Err(CoreError::ArityMismatch(format!("t has {} coordinates, P is {}x{}", t.coords.len(), p.n(), p.n())));
    }
    let (u, v) = phi1_generic(&z.coords, &t.coords, &p.inverse());
    Ok((ProjPoint::new(u)?, ProjPoint::new(v)?))
}

/// The three defining equations of the `φ1` image, each checked exactly.
/// `v` splits as `(ξ : η)`; the vector equations are read componentwise.
pub fn phi1_equations(u: &ProjPoint, v: &ProjPoint, p: &MatrixP) -> [bool; 3] {
    let n = p.n();
    if u.coords.len() != 3 || v.coords.len() != 2 * n {
        return [false; 3];
    }
    let (u1, u2, u3) = (u.coord(0), u.coord(1), u.coord(2));
    let (xi, eta) = v.coords.split_at(n);
    let pinv = p.inverse();
    let p_eta = p.apply(eta);
    let pinv_eta = pinv.apply(eta);
    let p_xi = p.apply(xi);
    let u1u2 = u1 * u2;
    let cubic = (&u1.pow(3) + &u2.pow(3)) == (&u1u2 * u3);
    let second = (0..n).all(|j| &(&u1.pow(2) * &eta[j]) + &(&u2.pow(2) * &pinv_eta[j]) == &u1u2 * &xi[j]);
    let third = (0..n).all(|j| {
        let lhs = &(&(u3 * &eta[j]) + &(u1 * &p_eta[j])) + &(u2 * &pinv_eta[j]);
        let rhs = &(u1 * &xi[j]) + &(u2 * &p_xi[j]);
        lhs == rhs
    });
    [cubic, second, third]
}

pub fn check_phi1_equations(u: &ProjPoint, v: &ProjPoint, p: &MatrixP) -> bool {
    phi1_equations(u, v, p).iter().all(|&b| b)
}

/// Inverse image `(u1:u2, η)` of a point with `u1 ≠ 0`; `None` on the glued locus.
pub fn phi1_preimage(u: &ProjPoint, v: &ProjPoint) -> Option<(ProjPoint, ProjPoint)> {
    if u.coords.len() != 3 || u.coord(0).is_zero() || u.coord(1).is_zero() {
        return None;
    }
    let n = v.coords.len() / 2;
    let z = ProjPoint::new(vec![u.coord(0).clone(), u.coord(1).clone()]).ok()?;
    let t = ProjPoint::new(v.coords[n..].to_vec()).ok()?;
    Some((z, t))
}

/// The twelve cubic-by-cubic monomial combinations `u1, …, u12`.
pub fn phi2(z: &ProjPoint, w: &ProjPoint) -> Result<ProjPoint> {
    expect_line(z, "z")?;
    expect_line(w, "w")?;
    ProjPoint::new(phi2_generic(&z.coords, &w.coords))
}

/// `u10 = 0` forces `u4 = … = u12 = 0`, and `u2`, `u3` vanish together.
pub fn phi2_vanishing_pattern(u: &ProjPoint) -> bool {
    if u.coords.len() != 12 {
        return false;
    }
    if !u.coord(9).is_zero() {
        return true;
    }
    u.coords[3..].iter().all(GaussQ::is_zero) && u.coord(1).is_zero() == u.coord(2).is_zero()
}

/// Inverse image `(u7:u10, u10:u11)` of a point with `u10 ≠ 0`.
pub fn phi2_preimage(u: &ProjPoint) -> Option<(ProjPoint, ProjPoint)> {
    if u.coords.len() != 12 || u.coord(9).is_zero() {
        return None;
    }
    let z = ProjPoint::new(vec![u.coord(6).clone(), u.coord(9).clone()]).ok()?;
    let w = ProjPoint::new(vec![u.coord(9).clone(), u.coord(10).clone()]).ok()?;
    Some((z, w))
}

/// Which map a probe exercises.
#[derive(Clone, Debug)]
pub enum EmbeddingMap {
    Phi1(MatrixP),
    Phi2,
}

impl EmbeddingMap {
    pub fn name(&self) -> &'static str {
        match self {
            EmbeddingMap::Phi1(_) => "phi1",
            EmbeddingMap::Phi2 => "phi2",
        }
    }

    fn second_factor_len(&self) -> usize {
        match self {
            EmbeddingMap::Phi1(p) => p.n(),
            EmbeddingMap::Phi2 => 2,
        }
    }

    /// Image as a list of projective factors.
    pub fn image(&self, z: &ProjPoint, t: &ProjPoint) -> Result<Vec<ProjPoint>> {
        match self {
            EmbeddingMap::Phi1(p) => {
                let (u, v) = phi1(z, t, p)?;
                Ok(vec![u, v])
            }
            EmbeddingMap::Phi2 => Ok(vec![phi2(z, t)?]),
        }
    }

    /// A fixed representative of the gluing class of `(z, t)`.
    pub fn canonical(&self, z: &ProjPoint, t: &ProjPoint) -> (ProjPoint, ProjPoint) {
        let e1 = |len: usize| {
            let mut c = vec![GaussQ::zero(); len];
            c[0] = GaussQ::one();
            ProjPoint { coords: c }
        };
        match self {
            // (0:1, s) ~ (1:0, P⁻¹ s)
            EmbeddingMap::Phi1(p) if z.is_multiple_of_basis(1) => {
                (e1(2), ProjPoint { coords: p.inverse().apply(&t.coords) })
            }
            EmbeddingMap::Phi1(_) => (z.clone(), t.clone()),
            // (s, 0:1) ~ (1:0, s), applied until the second factor moves off 0:1
            EmbeddingMap::Phi2 => {
                let (mut z, mut w) = (z.clone(), t.clone());
                while w.is_multiple_of_basis(1) {
                    (z, w) = (e1(2), z);
                }
                (z, w)
            }
        }
    }

    pub fn identified(&self, a: &(ProjPoint, ProjPoint), b: &(ProjPoint, ProjPoint)) -> bool {
        let ca = self.canonical(&a.0, &a.1);
        let cb = self.canonical(&b.0, &b.1);
        ca.0 == cb.0 && ca.1 == cb.1
    }

    /// Equations (φ1) or the vanishing pattern (φ2), plus the explicit inverse
    /// where it applies.
    fn image_checks(&self, z: &ProjPoint, t: &ProjPoint, image: &[ProjPoint]) -> Vec<&'static str> {
        let mut failed = Vec::new();
        match self {
            EmbeddingMap::Phi1(p) => {
                let names = ["cubic equation", "quadratic block equation", "linear block equation"];
                for (ok, name) in phi1_equations(&image[0], &image[1], p).iter().zip(names) {
                    if !ok {
                        failed.push(name);
                    }
                }
                if let Some(pre) = phi1_preimage(&image[0], &image[1]) {
                    if !(pre.0 == *z && pre.1 == *t) {
                        failed.push("inverse image");
                    }
                }
            }
            EmbeddingMap::Phi2 => {
                if !phi2_vanishing_pattern(&image[0]) {
                    failed.push("vanishing pattern");
                }
                if let Some(pre) = phi2_preimage(&image[0]) {
                    if !(pre.0 == *z && pre.1 == *t) {
                        failed.push("inverse image");
                    }
                }
            }
        }
        failed
    }

    /// Rank of the differential at `(z, t)`, from exact polynomial derivatives
    /// in the affine chart that sets the first nonzero coordinate of each
    /// factor to 1.
    pub fn differential_rank(&self, z: &ProjPoint, t: &ProjPoint) -> usize {
        let m = self.second_factor_len();
        let nvars = m;
        let one = GaussQ::one();
        let mut point = Vec::with_capacity(nvars);
        let mut chart = |p: &ProjPoint, first_var: usize| -> Vec<SparsePoly<GaussQ>> {
            let k = p.coords.iter().position(|c| !c.is_zero()).expect("nonzero point");
            let inv = p.coords[k].checked_inv().expect("nonzero");
            let mut var = first_var;
            p.coords
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    if i == k {
                        SparsePoly::constant(nvars, one.clone())
                    } else {
                        point.push(c * &inv);
                        var += 1;
                        SparsePoly::var(nvars, var - 1, one.clone())
                    }
                })
                .collect()
        };
        let zs = chart(z, 0);
        let ts = chart(t, 1);
        let factors: Vec<Vec<SparsePoly<GaussQ>>> = match self {
            EmbeddingMap::Phi1(p) => {
                let (u, v) = phi1_generic(&zs, &ts, &p.inverse());
                vec![u, v]
            }
            EmbeddingMap::Phi2 => vec![phi2_generic(&zs, &ts)],
        };
        let total: usize = factors.iter().map(Vec::len).sum();
        let eval = |q: &SparsePoly<GaussQ>| q.eval(&point).expect("arity");
        let mut rows: Vec<Vec<GaussQ>> = Vec::new();
        // Each factor's own position vector spans the scaling direction.
        let mut offset = 0;
        for f in &factors {
            let mut row = vec![GaussQ::zero(); total];
            for (i, q) in f.iter().enumerate() {
                row[offset + i] = eval(q);
            }
            rows.push(row);
            offset += f.len();
        }
        for k in 0..nvars {
            rows.push(factors.iter().flatten().map(|q| eval(&q.derivative(k))).collect());
        }
        linalg::rank(&rows) - factors.len()
    }
}

/// Two sampled domain points whose images contradict the gluing.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    /// `"collision"`: distinct classes, equal images. `"split"`: glued points,
    /// different images.
    pub kind: String,
    pub a: String,
    pub b: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointFailure {
    pub point: String,
    pub check: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub map: String,
    pub seed: u64,
    pub samples: usize,
    pub points: usize,
    pub distinct_pairs: usize,
    pub identified_pairs: usize,
    pub skipped_duplicates: usize,
    pub point_failures: Vec<PointFailure>,
    pub violations: Vec<Violation>,
}

impl ProbeReport {
    pub fn passed(&self) -> bool {
        self.point_failures.is_empty() && self.violations.is_empty()
    }
}

fn random_gauss(rng: &mut ChaCha8Rng) -> GaussQ {
    let re = GaussQ::ratio(rng.random_range(-6..=6), rng.random_range(1..=5));
    if rng.random_bool(0.5) {
        re
    } else {
        &re + &(&GaussQ::ratio(rng.random_range(-6..=6), rng.random_range(1..=5)) * &GaussQ::i())
    }
}

fn random_point(rng: &mut ChaCha8Rng, len: usize) -> ProjPoint {
    loop {
        let coords: Vec<GaussQ> = (0..len).map(|_| random_gauss(rng)).collect();
        if let Ok(p) = ProjPoint::new(coords) {
            return p;
        }
    }
}

fn random_nonzero(rng: &mut ChaCha8Rng) -> GaussQ {
    loop {
        let g = random_gauss(rng);
        if !g.is_zero() {
            return g;
        }
    }
}

fn line(a: i64, b: i64) -> ProjPoint {
    ProjPoint::from_ints(&[a, b]).expect("nonzero")
}

/// Draws `samples` random domain points, adds glued partners and rescaled
/// duplicates, then checks every image and every pair.
pub fn injectivity_probe(map: &EmbeddingMap, samples: usize, seed: u64) -> Result<ProbeReport> {
    if samples == 0 {
        return Err(CoreError::PreconditionViolated("samples must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = map.second_factor_len();
    let mut points: Vec<(ProjPoint, ProjPoint)> = Vec::new();
    for i in 0..samples {
        let p = (random_point(&mut rng, 2), random_point(&mut rng, m));
        points.push(p.clone());
        if i % 5 == 0 {
            let t = random_point(&mut rng, m);
            match map {
                EmbeddingMap::Phi1(pm) => {
                    points.push((line(1, 0), t.clone()));
                    points.push((line(0, 1), ProjPoint::new(pm.apply(&t.coords))?));
                }
                EmbeddingMap::Phi2 => {
                    points.push((line(1, 0), t.clone()));
                    points.push((t, line(0, 1)));
                }
            }
        }
        if i % 10 == 0 {
            let s = random_nonzero(&mut rng);
            points.push((p.0.scaled(&s)?, p.1.scaled(&random_nonzero(&mut rng))?));
        }
    }
    if let EmbeddingMap::Phi2 = map {
        points.extend([(line(1, 0), line(1, 0)), (line(1, 0), line(0, 1)), (line(0, 1), line(0, 1))]);
    }

    let expected_rank = m;
    let per_point: Vec<Result<(Vec<ProjPoint>, Vec<&'static str>)>> = std::thread::scope(|s| {
        let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(8);
        let chunk = points.len().div_ceil(workers);
        let handles: Vec<_> = points
            .chunks(chunk)
            .map(|part| {
                s.spawn(move || {
                    part.iter()
                        .map(|(z, t)| {
                            let image = map.image(z, t)?;
                            let mut failed = map.image_checks(z, t, &image);
                            if map.differential_rank(z, t) != expected_rank {
                                failed.push("differential rank");
                            }
                            Ok((image, failed))
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("probe worker")).collect()
    });

    let mut images = Vec::with_capacity(points.len());
    let mut point_failures = Vec::new();
    for ((z, t), r) in points.iter().zip(per_point) {
        let (image, failed) = r?;
        for check in failed {
            point_failures.push(PointFailure { point: format!("{z} {t}"), check: check.into() });
        }
        images.push(image);
    }

    let mut report = ProbeReport {
        map: map.name().into(),
        seed,
        samples,
        points: points.len(),
        distinct_pairs: 0,
        identified_pairs: 0,
        skipped_duplicates: 0,
        point_failures,
        violations: Vec::new(),
    };
    let canon: Vec<_> = points.iter().map(|(z, t)| map.canonical(z, t)).collect();
    for a in 0..points.len() {
        for b in a + 1..points.len() {
            if points[a].0 == points[b].0 && points[a].1 == points[b].1 {
                report.skipped_duplicates += 1;
                continue;
            }
            let glued = canon[a].0 == canon[b].0 && canon[a].1 == canon[b].1;
            let same = images[a] == images[b];
            let kind = if glued {
                report.identified_pairs += 1;
                (!same).then_some("split")
            } else {
                report.distinct_pairs += 1;
                same.then_some("collision")
            };
            if let Some(kind) = kind {
                report.violations.push(Violation {
                    kind: kind.into(),
                    a: format!("{} {}", points[a].0, points[a].1),
                    b: format!("{} {}", points[b].0, points[b].1),
                });
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn swap() -> MatrixP {
        MatrixP::from_row_major(2, &[0, 1, 1, 0].map(GaussQ::from_int)).unwrap()
    }

    fn diag12() -> MatrixP {
        MatrixP::from_row_major(2, &[1, 0, 0, 2].map(GaussQ::from_int)).unwrap()
    }

    #[test]
    fn projective_equality_ignores_scale() {
        let a = ProjPoint::from_ints(&[1, 2, 0]).unwrap();
        assert_eq!(a, a.scaled(&GaussQ::complex(3, 1, -2, 7)).unwrap());
        assert_ne!(a, ProjPoint::from_ints(&[1, 2, 1]).unwrap());
        assert!(ProjPoint::from_ints(&[0, 0]).is_err());
    }

    #[test]
    fn phi1_on_the_glued_locus() {
        let p = diag12();
        let t = ProjPoint::from_ints(&[3, -1]).unwrap();
        let (u, v) = phi1(&line(1, 0), &t, &p).unwrap();
        assert_eq!(u, ProjPoint::from_ints(&[0, 0, 1]).unwrap());
        assert_eq!(v, ProjPoint::from_ints(&[3, -1, 0, 0]).unwrap());
        let pt = ProjPoint::new(p.apply(t.coords())).unwrap();
        assert_eq!(phi1(&line(0, 1), &pt, &p).unwrap(), (u, v));
    }

    #[test]
    fn phi1_by_substitution() {
        // z = (1:1), t = (1:0), P = swap: P⁻¹t = (0,1), so ξ = (1, 1), η = (1, 0).
        let (u, v) = phi1(&line(1, 1), &line(1, 0), &swap()).unwrap();
        assert_eq!(u, ProjPoint::from_ints(&[1, 1, 2]).unwrap());
        assert_eq!(v, ProjPoint::from_ints(&[1, 1, 1, 0]).unwrap());
        assert!(check_phi1_equations(&u, &v, &swap()));
    }

    #[test]
    fn phi1_equations_reject() {
        let p = swap();
        let v = ProjPoint::from_ints(&[1, 2, 3, 4]).unwrap();
        assert!(!phi1_equations(&ProjPoint::from_ints(&[1, 1, 1]).unwrap(), &v, &p)[0]);
        let u = ProjPoint::from_ints(&[0, 0, 1]).unwrap();
        assert_eq!(phi1_equations(&u, &v, &p), [true, true, false]);
    }

    #[test]
    fn phi2_by_substitution() {
        let u = phi2(&line(0, 1), &line(1, 0)).unwrap();
        let mut only10 = vec![0; 12];
        only10[9] = 1;
        assert_eq!(u, ProjPoint::from_ints(&only10).unwrap());
        assert!(u.coords()[..9].iter().all(GaussQ::is_zero));
        // z = w = (1:1): u1 = 2 + 1, u2 = u3 = 1 + 1, the rest single monomials.
        let u = phi2(&line(1, 1), &line(1, 1)).unwrap();
        let expected: Vec<GaussQ> = [3, 2, 2, 1, 1, 1, 1, 1, 1, 1, 1, 1].map(GaussQ::from_int).to_vec();
        assert_eq!(u.coords(), &expected[..]);
    }

    #[test]
    fn phi2_glues() {
        let t = ProjPoint::parse("2:1/3+i").unwrap();
        assert_eq!(phi2(&line(1, 0), &t).unwrap(), phi2(&t, &line(0, 1)).unwrap());
        let triple = [(line(1, 0), line(1, 0)), (line(1, 0), line(0, 1)), (line(0, 1), line(0, 1))];
        let img: Vec<_> = triple.iter().map(|(z, w)| phi2(z, w).unwrap()).collect();
        assert!(img.windows(2).all(|w| w[0] == w[1]));
        assert!(EmbeddingMap::Phi2.identified(&triple[0], &triple[2]));
    }

    #[test]
    fn differential_has_full_rank() {
        let t = ProjPoint::parse("1:2").unwrap();
        let phi1 = EmbeddingMap::Phi1(swap());
        assert_eq!(phi1.differential_rank(&ProjPoint::parse("1:3").unwrap(), &t), 2);
        assert_eq!(phi1.differential_rank(&line(1, 0), &t), 2);
        assert_eq!(EmbeddingMap::Phi2.differential_rank(&line(1, 0), &line(0, 1)), 2);
    }

    #[test]
    fn probes_pass() {
        for map in [EmbeddingMap::Phi1(swap()), EmbeddingMap::Phi1(diag12()), EmbeddingMap::Phi2] {
            let r = injectivity_probe(&map, 30, 7).unwrap();
            assert!(r.passed(), "{r:?}");
            assert!(r.identified_pairs > 0 && r.skipped_duplicates > 0);
        }
    }

    #[test]
    fn glued_pair_is_not_a_violation() {
        let map = EmbeddingMap::Phi1(diag12());
        let t = ProjPoint::from_ints(&[1, 1]).unwrap();
        let a = (line(1, 0), t.clone());
        let b = (line(0, 1), ProjPoint::from_ints(&[1, 2]).unwrap());
        assert!(map.identified(&a, &b));
        assert_eq!(map.image(&a.0, &a.1).unwrap(), map.image(&b.0, &b.1).unwrap());
    }
}
