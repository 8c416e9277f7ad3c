use std::time::Instant;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qes::ansatz::{ansatz_params_at, invariance_check, qes_block};
use qes::model::{derive_constants, CouplingCase, ParticlePair, PotentialSpec};
use qes::oracle::{auto_grid, cross_validate, ladder_eigenvalues, line_ode, ode_residual, residual_samples, OracleOptions};
use qes::sl2::{commutator_defect, Laurent, RepSpace};
use qes::spectra::{relative_energy, solve_cell, FormulaVariant, SpectrumLine};

struct Outcome {
    pass: bool,
    detail: String,
}

fn report(n: usize, name: &str, started: Instant, limit_s: f64, out: Outcome) -> bool {
    let secs = started.elapsed().as_secs_f64();
    let pass = out.pass && secs < limit_s;
    println!(
        "criterion {n} {}: {name} ({secs:.2} s, limit {limit_s} s) {}",
        if pass { "PASS" } else { "FAIL" },
        out.detail
    );
    pass
}

/// Charged pair with `e_c = 0`, reduced mass `m_r` and cyclotron frequency `omega_c`.
fn charged_pair(m_r: f64, omega_c: f64) -> ParticlePair {
    // equal masses and unit charges: e_c = 0 and q / M = 1 / (2 m_r)
    ParticlePair {
        m1: 2.0 * m_r,
        m2: 2.0 * m_r,
        e1: 1.0,
        e2: 1.0,
        b: omega_c * 2.0 * m_r,
    }
}

fn criterion_1() -> Outcome {
    let bad: Vec<usize> = (1..=25)
        .filter(|&n| commutator_defect(RepSpace::new(n).unwrap()) != 0.into())
        .collect();
    Outcome {
        pass: bad.is_empty(),
        detail: format!("dims 1..=25, nonzero defect at {bad:?}"),
    }
}

fn criterion_2() -> Outcome {
    let pots = [
        PotentialSpec::FamilyI { coulomb: 0.7, theta: 0.13, k1: -0.4, k2: 0.25 },
        PotentialSpec::FamilyII { theta: 0.21, k2: -1.5, k4: 0.6, k6: 0.45 },
        PotentialSpec::FamilyIII { l1: -0.8, l2: 0.0, l3: 0.17, l4: 0.35, k2: 1.1 },
    ];
    let mut checked = 0;
    let mut failures = Vec::new();
    for pot in &pots {
        for d in 0..=8usize {
            for s in -2..=2 {
                let a = match ansatz_params_at(pot, CouplingCase::ChargedEc0, 0.8, 1.7, s, d) {
                    Ok(a) => a,
                    Err(e) => {
                        failures.push(format!("{:?} d={d} s={s}: {e}", pot.family()));
                        continue;
                    }
                };
                checked += 1;
                let cert = invariance_check(&a);
                if !cert.closed {
                    failures.push(format!("{:?} d={d} s={s}: not closed {:?}", pot.family(), cert.offending));
                    continue;
                }
                let shape = a.exact_shape();
                let op = shape.operator(d);
                let entries = shape.entries(d);
                let block = qes_block(&a);
                for k in 0..=d {
                    let image = op.apply_laurent(&Laurent::<BigRational>::monomial(k as i32));
                    for (i, row) in entries.iter().enumerate() {
                        if image.coeff(i as i32) != row[k] {
                            failures.push(format!("{:?} d={d} s={s}: exact entry ({i},{k})", pot.family()));
                        }
                        let x = row[k].to_f64().unwrap();
                        let y = block.matrix[(i, k)];
                        if (x - y).abs() > 4.0 * f64::EPSILON * x.abs().max(y.abs()) {
                            failures.push(format!("{:?} d={d} s={s}: block entry ({i},{k}) {y} vs {x}", pot.family()));
                        }
                    }
                }
            }
        }
    }
    Outcome {
        pass: failures.is_empty() && checked == 3 * 9 * 5,
        detail: format!("{checked} operators checked; failures {failures:?}"),
    }
}

fn criterion_3() -> Outcome {
    let mut worst = 0.0f64;
    let mut roots = 0;
    let mut errors = Vec::new();
    for &(m_r, g) in &[(0.5, 1.0), (1.3, -0.6), (0.7, 2.5)] {
        let pot = PotentialSpec::FamilyI { coulomb: g, theta: 0.0, k1: 0.0, k2: 0.0 };
        let consts = derive_constants(&charged_pair(m_r, 1.0)).unwrap();
        let eps = 2.0 * m_r * g;
        for d in 0..=5 {
            for s in -2..=2 {
                match solve_cell(&consts, CouplingCase::ChargedEc0, &pot, d, s, FormulaVariant::Derived) {
                    Ok(lines) => {
                        for l in lines.iter().filter(|l| !l.flags.field_degenerate) {
                            let nu = l.nu.unwrap();
                            let rel = (nu * nu * l.field * m_r - eps * eps).abs() / (eps * eps);
                            worst = worst.max(rel);
                            roots += 1;
                        }
                    }
                    Err(e) => errors.push(format!("d={d} s={s}: {e}")),
                }
            }
        }
    }
    Outcome {
        pass: errors.is_empty() && roots > 0 && worst < 1e-10,
        detail: format!("{roots} roots, worst relative error {worst:.2e}; errors {errors:?}"),
    }
}

fn fixture_two(variant: FormulaVariant) -> SpectrumLine {
    let pot = PotentialSpec::FamilyII { theta: 0.0, k2: -4.0, k4: 0.0, k6: 0.5 };
    let consts = derive_constants(&charged_pair(1.0, 1.0)).unwrap();
    let mut lines = solve_cell(&consts, CouplingCase::ChargedEc0, &pot, 0, 0, variant).unwrap();
    assert_eq!(lines.len(), 1);
    lines.remove(0)
}

fn residual_of(line: &SpectrumLine) -> f64 {
    let wf = line.wavefunction();
    let samples = residual_samples(&wf, 1000).unwrap();
    ode_residual(&wf, line.e_rho, &line_ode(line), &samples)
}

fn criterion_4() -> Outcome {
    let line = fixture_two(FormulaVariant::Derived);
    let resid = residual_of(&line);
    let rep = cross_validate(&line, &OracleOptions::default()).unwrap();
    let m = rep.matched_line.unwrap();
    let alternate = fixture_two(FormulaVariant::Alternate);
    let alt_rep = cross_validate(&alternate, &OracleOptions::default()).unwrap();
    let pass = line.field == 4.0
        && line.e_rho == 0.0
        && resid < 1e-12
        && m.delta.abs() < 1e-6
        && m.relative < 1e-6
        && !alt_rep.pass;
    Outcome {
        pass,
        detail: format!(
            "omega_c = {}, E = {}, residual {resid:.1e}, oracle gap {:.1e}; alternate variant omega_c = {:.6} residual {:.2e} rejected = {}",
            line.field,
            line.e_rho,
            m.delta.abs(),
            alternate.field,
            alt_rep.residual_max,
            !alt_rep.pass
        ),
    }
}

fn fixture_three(variant: FormulaVariant) -> SpectrumLine {
    let pot = PotentialSpec::FamilyIII { l1: -1.0, l2: 0.0, l3: 0.0, l4: 0.5, k2: 2.0 };
    let consts = derive_constants(&charged_pair(1.0, 4.0)).unwrap();
    let mut lines = solve_cell(&consts, CouplingCase::ChargedEc0, &pot, 0, 0, variant).unwrap();
    assert_eq!(lines.len(), 1);
    lines.remove(0)
}

fn criterion_5() -> Outcome {
    let line = fixture_three(FormulaVariant::Derived);
    let resid = residual_of(&line);
    let rep = cross_validate(&line, &OracleOptions::default()).unwrap();
    let alternate = fixture_three(FormulaVariant::Alternate);
    let alt_rep = cross_validate(&alternate, &OracleOptions::default()).unwrap();
    let pass = line.quantized_value == -0.875
        && line.e_rho == -0.5
        && resid < 1e-12
        && rep.pass
        && alternate.e_rho == -0.25
        && alt_rep.residual_max > 0.1
        && !alt_rep.pass;
    Outcome {
        pass,
        detail: format!(
            "l2 = {}, E = {}, residual {resid:.1e}, oracle pass {}; alternate E = {} residual {:.2}",
            line.quantized_value, line.e_rho, rep.pass, alternate.e_rho, alt_rep.residual_max
        ),
    }
}

struct Sample {
    case: CouplingCase,

    pot: PotentialSpec,
    d: usize,
    s: i32,
}

fn random_pair(rng: &mut ChaCha8Rng, case: CouplingCase) -> ParticlePair {
    let m1 = rng.gen_range(0.5..2.0);
    let m2 = rng.gen_range(0.5..2.0);
    let e1: f64 = rng.gen_range(0.5..1.5);
    let e2 = match case {
        CouplingCase::ChargedEc0 => e1 * m2 / m1,
        CouplingCase::NeutralRest => -e1,
    };
    ParticlePair { m1, m2, e1, e2, b: rng.gen_range(0.5..3.0) }
}

fn random_potential(rng: &mut ChaCha8Rng, family: usize) -> PotentialSpec {
    match family {
        0 => PotentialSpec::FamilyI {
            coulomb: rng.gen_range(-1.0..1.0),
            theta: rng.gen_range(0.0..0.5),
            k1: rng.gen_range(-0.5..0.5),
            k2: rng.gen_range(-0.1..0.5),
        },
        1 => PotentialSpec::FamilyII {
            theta: rng.gen_range(0.0..0.5),
            k2: rng.gen_range(-6.0..-1.0),
            k4: rng.gen_range(-1.0..1.0),
            k6: rng.gen_range(0.2..1.0),
        },
        _ => PotentialSpec::FamilyIII {
            l1: rng.gen_range(-1.5..-0.3),
            l2: 0.0,
            l3: rng.gen_range(-0.1..0.3),
            l4: rng.gen_range(0.2..1.0),
            k2: rng.gen_range(0.2..2.0),
        },
    }
}

fn random_suite() -> (Vec<Sample>, Vec<SpectrumLine>) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_2024);
    let mut samples = Vec::new();
    let mut lines = Vec::new();
    for i in 0..24 {
        let family = i % 3;
        let case = if (i / 3) % 2 == 0 { CouplingCase::ChargedEc0 } else { CouplingCase::NeutralRest };
        for _attempt in 0..200 {
            let pair = random_pair(&mut rng, case);
            let pot = random_potential(&mut rng, family);
            let d = rng.gen_range(0..=3usize);
            let s = rng.gen_range(-2..=2);
            let consts = derive_constants(&pair).unwrap();
            let Ok(found) = solve_cell(&consts, case, &pot, d, s, FormulaVariant::Derived) else {
                continue;
            };
            let usable: Vec<SpectrumLine> = found
                .into_iter()
                .filter(|l| l.flags.real_branch && l.flags.normalizable && !l.flags.field_degenerate)
                .collect();
            if usable.is_empty() {
                continue;
            }
            samples.push(Sample { case, pot, d, s });
            lines.extend(usable);
            break;
        }
    }
    (samples, lines)
}

fn criterion_6(lines: &[SpectrumLine], samples: &[Sample]) -> Outcome {
    use rayon::prelude::*;
    let opts = OracleOptions::default();
    let results: Vec<(String, Result<qes::OracleReport, qes::QesError>)> = lines
        .par_iter()
        .map(|l| {
            let tag = format!("{:?}/{} d={} s={} br={} E={:.6}", l.family, l.case.name(), l.d, l.s, l.branch, l.e_rho);
            (tag, cross_validate(l, &opts))
        })
        .collect();
    let mut worst_gap = 0.0f64;
    let mut worst_res = 0.0f64;
    let mut failed = Vec::new();
    for (tag, r) in &results {
        match r {
            Ok(rep) if rep.pass => {
                let m = rep.matched_line.unwrap();
                worst_gap = worst_gap.max(m.relative);
                worst_res = worst_res.max(rep.residual_max);
            }
            Ok(rep) => failed.push(format!(
                "{tag}: gap {:?} residual {:.1e} {}",
                rep.matched_line.map(|m| m.relative),
                rep.residual_max,
                rep.note.clone().unwrap_or_default()
            )),
            Err(e) => failed.push(format!("{tag}: {e}")),
        }
    }
    let families: std::collections::BTreeSet<_> = samples.iter().map(|s| (s.pot.family(), s.case)).collect();
    let ds: std::collections::BTreeSet<usize> = samples.iter().map(|s| s.d).collect();
    let ss: std::collections::BTreeSet<i32> = samples.iter().map(|s| s.s).collect();
    let in_range = samples.iter().all(|s| s.d <= 3 && s.s.abs() <= 2);
    Outcome {
        pass: samples.len() >= 20 && families.len() == 6 && in_range && failed.is_empty(),
        detail: format!(
            "{} parameter sets over {} family/case combinations, d in {ds:?}, s in {ss:?}, {} lines; worst gap {worst_gap:.1e}, worst residual {worst_res:.1e}; failures {failed:?}",
            samples.len(),
            families.len(),
            lines.len()
        ),
    }
}

fn criterion_7() -> Outcome {
    let m = 0.5;
    let field = 2.0;
    let energies = |theta: f64, d: usize| -> Vec<f64> {
        let pot = PotentialSpec::FamilyI { coulomb: 0.3, theta, k1: 0.0, k2: 0.0 };
        let consts = derive_constants(&charged_pair(m, field)).unwrap();
        let coupling = CouplingCase::ChargedEc0.coupling_at(&consts, field);
        (1..=3)
            .map(|s| {
                let a = ansatz_params_at(&pot, CouplingCase::ChargedEc0, m, field, s, d).unwrap();
                relative_energy(&a, &coupling, m, 0.0, FormulaVariant::Derived)
            })
            .collect()
    };
    let mut pass = true;
    let mut detail = String::new();
    for d in 0..=3 {
        let e0 = energies(0.0, d);
        let e1 = energies(0.1, d);
        let equal = e0.iter().all(|e| *e == e0[0]);
        let split = (0..3).all(|i| (0..i).all(|j| (e1[i] - e1[j]).abs() > 1e-6));
        pass &= equal && split;
        detail += &format!("d={d}: theta=0 {e0:?}, theta=0.1 {e1:?}; ");
    }
    Outcome { pass, detail }
}

fn criterion_8() -> Outcome {
    let m = 0.5;
    let mut pass = true;
    let mut detail = String::new();
    for &(w, k2) in &[(1.0, 0.0), (2.0, 0.3), (1.5, -0.1)] {
        let pot = PotentialSpec::FamilyI { coulomb: 0.0, theta: 0.0, k1: 0.0, k2 };
        let consts = derive_constants(&charged_pair(m, w)).unwrap();
        let w_eff = (w * w + 8.0 * k2 / m).sqrt();
        for s in [-1, 0, 2] {
            let lines = solve_cell(&consts, CouplingCase::ChargedEc0, &pot, 0, s, FormulaVariant::Derived).unwrap();
            let Some(line) = lines.first() else {
                pass = false;
                detail += &format!("(w={w}, k2={k2}, s={s}) no line; ");
                continue;
            };
            let closed = w_eff * (s.abs() as f64 + 1.0) / 2.0;
            let algebraic = line.e_rho + s as f64 * w / 2.0;
            let ode = line_ode(line);
            let grid = auto_grid(&ode, line.e_rho, &OracleOptions::default()).unwrap();
            let lad = ladder_eigenvalues(&ode, &grid, 2, 3).unwrap();
            let oracle = lad.extrapolated[0] + s as f64 * w / 2.0;
            let ok = (algebraic - closed).abs() < 1e-12 * closed && (oracle - closed).abs() < 1e-5 && (line.field - w).abs() < 1e-12 * w;
            pass &= ok;
            detail += &format!("(w={w}, k2={k2}, s={s}) {closed:.10} oracle gap {:.1e}; ", (oracle - closed).abs());
        }
    }
    Outcome { pass, detail }
}

fn criterion_9(lines: &[SpectrumLine]) -> Outcome {
    let bad: Vec<String> = lines
        .iter()
        .filter(|l| l.flags.nodes > l.d)
        .map(|l| format!("{:?} d={} nodes={}", l.family, l.d, l.flags.nodes))
        .collect();
    Outcome {
        pass: bad.is_empty() && !lines.is_empty(),
        detail: format!("{} lines checked; violations {bad:?}", lines.len()),
    }
}

fn main() {
    let mut all = true;
    let t = Instant::now();
    all &= report(1, "sl(2) representation exactness", t, 1.0, criterion_1());
    let t = Instant::now();
    all &= report(2, "invariance suite", t, 5.0, criterion_2());
    let t = Instant::now();
    all &= report(3, "Coulomb-limit regression", t, 10.0, criterion_3());
    let t = Instant::now();
    all &= report(4, "analytic fixture II", t, 30.0, criterion_4());
    let t = Instant::now();
    all &= report(5, "analytic fixture III", t, 30.0, criterion_5());
    let t = Instant::now();
    let (samples, lines) = random_suite();
    all &= report(6, "randomized oracle cross-validation", t, 60.0, criterion_6(&lines, &samples));
    let t = Instant::now();
    all &= report(7, "Landau degeneracy", t, 5.0, criterion_7());
    let t = Instant::now();
    all &= report(8, "oscillator sanity", t, 30.0, criterion_8());
    let t = Instant::now();
    all &= report(9, "node bound", t, 5.0, criterion_9(&lines));
    if !all {
        std::process::exit(1);
    }
}
