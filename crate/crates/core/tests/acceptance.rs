//! Acceptance run: every criterion is checked with its time limit and
//! reported on its own line. Exits nonzero if any criterion fails.

use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rational_ba::diffop::{multi_indices, DiffOp, OperatorBuilder, ScalarOp};
use rational_ba::embedding::{injectivity_probe, EmbeddingMap};
use rational_ba::golden::{reproduce, GoldenFile};
use rational_ba::mero::{mero_basis, MeroFunc};
use rational_ba::module::{expected_dimension, grade_basis, ModuleBasis, ModuleElement};
use rational_ba::spectral::{solve_flow_space, solve_flow_space_omega, SpectralData};
use rational_ba::{presets, ExpContext, ExpRat, GaussQ, Result, UPoly};

type Outcome = std::result::Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lift<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn operators(name: &str) -> std::result::Result<(OperatorBuilder, Vec<(MeroFunc, DiffOp)>), String> {
    let (_, basis, lambdas) = presets::load(name).ok_or("missing preset")?;
    let builder = OperatorBuilder::new(basis);
    let ops = lambdas
        .into_iter()
        .map(|l| {
            let op = lift(builder.build(&l))?;
            Ok((l, op))
        })
        .collect::<std::result::Result<Vec<_>, String>>()?;
    Ok((builder, ops))
}

fn reproduction(name: &str, first: &str) -> Outcome {
    let (data, _, _) = presets::load(name).ok_or("missing preset")?;
    let r = lift(reproduce(&GoldenFile::builtin(name).ok_or("missing golden file")?))?;
    let ctx = data.context();
    let d1 = DiffOp::scalar(lift(ScalarOp::parse(first, ctx))?, data.n());
    ensure(r.operators[0].1 == d1, || format!("D(λ1) is not {first}·I"))?;
    ensure(r.passed(), || {
        let located: Vec<String> = r
            .mismatches
            .iter()
            .map(|m| {
                let k = r.operators.iter().position(|(l, _)| *l == m.lambda).unwrap_or(0) + 1;
                format!("D(λ{k})[{}{}]: expected {}, computed {}", m.row + 1, m.col + 1, m.expected, m.computed)
            })
            .collect();
        format!("{} entries differ from the reference: {}", r.mismatches.len(), located.join("; "))
    })
}

fn criterion1() -> Outcome {
    reproduction("gamma-n2", "dx - dy")
}

fn criterion2() -> Outcome {
    reproduction("omega", "1/4*(dx + dy)")
}

fn criterion3() -> Outcome {
    for name in ["gamma-n2", "omega"] {
        let (_, ops) = operators(name)?;
        for (i, (_, a)) in ops.iter().enumerate() {
            for (j, (_, b)) in ops.iter().enumerate().skip(i + 1) {
                ensure(lift(a.commutator(b))?.is_zero(), || format!("{name}: [D(λ{}), D(λ{})] ≠ 0", i + 1, j + 1))?;
            }
        }
    }
    Ok(())
}

fn criterion4() -> Outcome {
    for name in ["gamma-n2", "omega"] {
        let (builder, ops) = operators(name)?;
        for (k, (l, op)) in ops.iter().enumerate() {
            // Oracle: apply each row to the basis and compare with λψ_i directly.
            for (i, (psi, row)) in builder.basis().elements().iter().zip(op.rows()).enumerate() {
                let target = lift(psi.mul_mero(l))?;
                let got = lift(builder.apply(row, target.grade()))?;
                ensure(got == target, || format!("{name}: row {} of D(λ{}) misses λψ", i + 1, k + 1))?;
            }
        }
    }
    Ok(())
}

fn criterion5() -> Outcome {
    for (n, data) in [(2, presets::gamma_n2()), (3, presets::gamma_n3())] {
        for k in 1..=4 {
            let dim = lift(grade_basis(&data, k))?.dimension();
            // Independent count: k·C(k+n-1, n-1) by direct product.
            let binom: usize = (1..n).map(|i| k as usize + i).product::<usize>() / (1..n).product::<usize>();
            ensure(dim == k as usize * binom && dim == expected_dimension(n, k), || {
                format!("n={n}, k={k}: grade dimension {dim}, expected {}", k as usize * binom)
            })?;
        }
    }
    let omega = presets::omega();
    for k in 1..=4 {
        let dim = lift(grade_basis(&omega, k))?.dimension();
        ensure(dim == k as usize * (k as usize + 1), || format!("omega k={k}: dimension {dim}"))?;
    }
    Ok(())
}

fn criterion6() -> Outcome {
    for data in [presets::gamma_n2(), presets::gamma_n3()] {
        let g = data.to_gamma().ok_or("not a gamma preset")?;
        let sols = lift(solve_flow_space(&g.f, &g.p, &g.a))?;
        ensure(sols.len() == data.n() + 1, || format!("n={}: {} flow solutions", data.n(), sols.len()))?;
        // Oracle: each solution satisfies its identity by direct substitution.
        let f1 = g.f.at_first_point();
        for s in &sols {
            let r = lift(lift(data.gluing_residual(&s.form, &g.a))?.sub(&f1.scale(&s.c)))?;
            ensure(r.is_zero(), || format!("n={}: {} violates the flow identity", data.n(), s.form))?;
        }
    }
    let o = presets::omega().to_omega().ok_or("not an omega preset")?;
    let sols = lift(solve_flow_space_omega(&o.g, &o.b))?;
    ensure(sols.len() == 3, || format!("omega: {} flow solutions", sols.len()))
}

fn criterion7() -> Outcome {
    for name in ["gamma-n2", "omega"] {
        let (data, basis, _) = presets::load(name).ok_or("missing preset")?;
        let builder = OperatorBuilder::new(basis);
        let mut funcs = Vec::new();
        for d in 1..=2 {
            funcs.extend(lift(mero_basis(&data, d))?);
        }
        let ops: Vec<DiffOp> = funcs.iter().map(|f| lift(builder.build(f))).collect::<std::result::Result<_, _>>()?;
        for (i, a) in funcs.iter().enumerate() {
            for (j, b) in funcs.iter().enumerate().skip(i) {
                let prod = lift(builder.build(&lift(a.mul(b))?))?;
                ensure(prod == lift(ops[i].compose(&ops[j]))?, || format!("{name}: D(λμ) ≠ D(λ)D(μ) for #{i}, #{j}"))?;
                if a.degree() == b.degree() {
                    let sum = lift(builder.build(&lift(a.add(b))?))?;
                    ensure(sum == lift(ops[i].add(&ops[j]))?, || format!("{name}: D(λ+μ) ≠ D(λ)+D(μ) for #{i}, #{j}"))?;
                }
            }
        }
    }
    Ok(())
}

fn criterion8() -> Outcome {
    let maps = [
        ("gamma-n2", EmbeddingMap::Phi1(presets::gamma_n2().to_gamma().ok_or("gamma")?.p)),
        ("gamma-n3", EmbeddingMap::Phi1(presets::gamma_n3().to_gamma().ok_or("gamma")?.p)),
        ("omega", EmbeddingMap::Phi2),
    ];
    for (name, map) in maps {
        let r = lift(injectivity_probe(&map, 100, 2024))?;
        ensure(r.passed() && r.identified_pairs > 0, || {
            format!("{name}: {} point failures, {} violations", r.point_failures.len(), r.violations.len())
        })?;
    }
    Ok(())
}

fn small_gauss(rng: &mut ChaCha8Rng) -> GaussQ {
    GaussQ::complex(rng.random_range(-4..=4), rng.random_range(1..=3), rng.random_range(-2..=2), 1)
}

fn random_exprat(rng: &mut ChaCha8Rng, ctx: &Arc<ExpContext>) -> ExpRat {
    let poly = |rng: &mut ChaCha8Rng, len: usize| UPoly::new((0..len).map(|_| small_gauss(rng)).collect());
    let (ln, ld) = (rng.random_range(1..=3), rng.random_range(1..=3));
    let num = poly(rng, ln);
    let mut den = poly(rng, ld);
    if den.is_zero() {
        den = UPoly::one();
    }
    ExpRat::from_parts(ctx, rng.random_range(-2..=2), num, den).expect("nonzero denominator")
}

fn random_laurent(rng: &mut ChaCha8Rng, ctx: &Arc<ExpContext>) -> ExpRat {
    let len = rng.random_range(1..=3);
    let coeffs = (0..len).map(|_| small_gauss(rng)).collect();
    ExpRat::laurent(ctx, rng.random_range(-1..=1), coeffs)
}

fn random_element(rng: &mut ChaCha8Rng, data: &Arc<SpectralData>, k: u32) -> Result<ModuleElement> {
    let space = grade_basis(data, k)?;
    let mut acc = ModuleElement::new(data, rational_ba::biform::BiForm::zero(data.n(), k, k))?;
    for e in space.elements() {
        acc = acc.add(&e.scale(&random_exprat(rng, data.context())))?;
    }
    Ok(acc)
}

fn criterion9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let ctx = presets::omega().context().clone();
    for i in 0..1000 {
        let a = random_exprat(&mut rng, &ctx);
        let b = random_exprat(&mut rng, &ctx);
        for j in 0..2 {
            let lhs = lift(lift(a.checked_mul(&b))?.derive(j))?;
            let rhs = lift(lift(lift(a.derive(j))?.checked_mul(&b))?.checked_add(&lift(a.checked_mul(&lift(b.derive(j))?))?))?;
            ensure(lhs == rhs, || format!("Leibniz rule fails for pair {i}: a = {a}, b = {b}"))?;
        }
        let xy = lift(lift(a.derive(0))?.derive(1))?;
        let yx = lift(lift(a.derive(1))?.derive(0))?;
        ensure(xy == yx, || format!("derivations do not commute on {a}"))?;
    }

    for name in ["gamma-n2", "omega"] {
        let (data, basis, lambdas) = presets::load(name).ok_or("missing preset")?;
        for i in 0..100 {
            let k = 1 + i % 3;
            let psi = lift(random_element(&mut rng, &data, k))?;
            let j = rng.random_range(0..data.n());
            lift(lift(psi.derive(j))?.check()).map_err(|e| format!("{name}: derivative leaves the module: {e}"))?;
            lift(psi.lift(rng.random_range(1..=2)).check()).map_err(|e| format!("{name}: lift leaves the module: {e}"))?;
            let l = &lambdas[rng.random_range(0..lambdas.len())];
            lift(lift(psi.mul_mero(l))?.check()).map_err(|e| format!("{name}: λψ leaves the module: {e}"))?;
        }
        expand_apply(&mut rng, &basis, name)?;
    }
    Ok(())
}

fn expand_apply(rng: &mut ChaCha8Rng, basis: &ModuleBasis, name: &str) -> Outcome {
    let builder = OperatorBuilder::new(basis.clone());
    let ctx = basis.context().clone();
    let n = basis.data().n();
    for trial in 0..20 {
        let row: Vec<ScalarOp> = (0..basis.len())
            .map(|_| {
                let terms = (0..=2u32).flat_map(|d| multi_indices(n, d)).filter_map(|alpha| {
                    rng.random_bool(0.6).then(|| (alpha, random_laurent(rng, &ctx)))
                });
                lift(ScalarOp::from_terms(&ctx, terms.collect::<Vec<_>>()))
            })
            .collect::<std::result::Result<_, _>>()?;
        let element = lift(builder.apply(&row, 3))?;
        let back = lift(builder.expand(&element))?;
        ensure(back == row, || format!("{name}: expand(apply(row)) ≠ row on trial {trial}"))?;
    }
    Ok(())
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Outcome); 9] = [
        ("Γ worked example operators", Duration::from_secs(1), criterion1),
        ("Ω worked example operators", Duration::from_secs(1), criterion2),
        ("pairwise commutators vanish", Duration::from_secs(5), criterion3),
        ("eigen-relation D(λ)Ψ = λΨ", Duration::from_secs(5), criterion4),
        ("graded piece dimensions", Duration::from_secs(30), criterion5),
        ("flow-space dimension", Duration::from_secs(1), criterion6),
        ("ring homomorphism", Duration::from_secs(30), criterion7),
        ("embedding probes", Duration::from_secs(10), criterion8),
        ("property suites", Duration::from_secs(60), criterion9),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let verdict = match (&outcome, elapsed <= limit) {
            (Ok(()), true) => "PASS".to_string(),
            (Ok(()), false) => format!("FAIL (over the {limit:?} limit)"),
            (Err(msg), _) => format!("FAIL ({msg})"),
        };
        if !verdict.starts_with("PASS") {
            failed += 1;
        }
        println!("criterion {}: {verdict} {name} [{:.3}s / {:?}]", i + 1, elapsed.as_secs_f64(), limit);
    }
    println!("{} of 9 criteria passed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
