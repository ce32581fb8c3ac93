//! Verification suites and the JSON report.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::fusion::{
    fuse_components, generated_algebra, ideal_check, min_power_to_regular, span_of_products, Rule, RuleFlags, RuleSet,
};
use crate::group::{haar_invariance_residual, FloatElement, HaarGrid};
use crate::labels::{parse_rational, Component};
use crate::numerics::{
    apply_schrodinger, apply_schrodinger_pair, central_character_residual, fourier_plancherel,
    fourier_plancherel_inverse, fractional_shift, gaussian_coefficient, intertwiner_residual, matrix_coefficient,
    pd_gram_min_eig, rotate_exact, rotation_45, tensor_coefficient, CoefficientFunction, Direction, GridFunction,
    GridSpec,
};
use crate::spectrum::{spectrum_layers, SpectrumGroup};

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CheckResult {
    Residual { value: f64 },
    Symbolic { expected: String, actual: String },
    Error { message: String },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub check: String,
    pub anchor: String,
    pub parameters: BTreeMap<String, Value>,
    pub result: CheckResult,
    pub tolerance: Option<f64>,
    pub pass: bool,
    pub flags: RuleFlags,
    pub seed: u64,
    pub timestamp: u64,
    pub grid: Option<GridSpec>,
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.pass { "PASS" } else { "FAIL" };
        match (&self.result, self.tolerance) {
            (CheckResult::Residual { value }, Some(tol)) => {
                write!(f, "{status} {} value={value:.3e} tol={tol:.1e}", self.check)
            }
            (CheckResult::Residual { value }, None) => write!(f, "{status} {} value={value:.3e}", self.check),
            (CheckResult::Symbolic { actual, .. }, _) => write!(f, "{status} {} {actual}", self.check),
            (CheckResult::Error { message }, _) => write!(f, "{status} {} error: {message}", self.check),
        }
    }
}

/// A group of related checks selectable with `verify --suite`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Unitarity,
    Homomorphism,
    GaussianOracle,
    CentralCharacter,
    PdGram,
    TensorProduct,
    Intertwiner,
    Haar,
    FusionRules,
    HeisenbergAlgebra,
    Sl2Algebra,
    Span2,
    Ideal,
    MinPower,
    Spectrum,
}

impl Suite {
    pub const ALL: [Suite; 15] = [
        Suite::Unitarity,
        Suite::Homomorphism,
        Suite::GaussianOracle,
        Suite::CentralCharacter,
        Suite::PdGram,
        Suite::TensorProduct,
        Suite::Intertwiner,
        Suite::Haar,
        Suite::FusionRules,
        Suite::HeisenbergAlgebra,
        Suite::Sl2Algebra,
        Suite::Span2,
        Suite::Ideal,
        Suite::MinPower,
        Suite::Spectrum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Unitarity => "unitarity",
            Suite::Homomorphism => "homomorphism",
            Suite::GaussianOracle => "gaussian-oracle",
            Suite::CentralCharacter => "central-character",
            Suite::PdGram => "pd-gram",
            Suite::TensorProduct => "tensor-product",
            Suite::Intertwiner => "intertwiner",
            Suite::Haar => "haar",
            Suite::FusionRules => "fusion-rules",
            Suite::HeisenbergAlgebra => "heisenberg-algebra",
            Suite::Sl2Algebra => "sl2-algebra",
            Suite::Span2 => "span2",
            Suite::Ideal => "ideal",
            Suite::MinPower => "min-power",
            Suite::Spectrum => "spectrum",
        }
    }

    /// Parse a comma-separated list; `all` selects every suite.
    pub fn parse_list(text: &str) -> Result<Vec<Suite>> {
        let mut out = Vec::new();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            if item == "all" {
                out.extend(Suite::ALL);
            } else {
                out.push(item.parse()?);
            }
        }
        if out.is_empty() {
            return Err(Error::Parse("empty suite list".into()));
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite `{s}`")))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The compactly supported test function `(1 - |x|²/9)^6` on the ball of radius 3.
pub fn haar_bump(x: &[f64]) -> f64 {
    let r2: f64 = x.iter().map(|v| v * v).sum();
    if r2 < 9.0 {
        (1.0 - r2 / 9.0).powi(6)
    } else {
        0.0
    }
}

/// Shifts for the Haar check, including ones that move the centre.
pub fn haar_shifts() -> Vec<FloatElement> {
    [(1.0, 0.0, 0.0), (0.0, 0.0, 2.3), (0.5, -1.0, 0.3), (-1.0, 1.0, 2.0), (0.7, 0.4, -1.0)]
        .into_iter()
        .map(|(p, q, t)| FloatElement::scalar(p, q, t))
        .collect()
}

struct Ctx<'a> {
    config: &'a Config,
    timestamp: u64,
    out: Vec<VerificationReport>,
}

struct Numeric {
    check: &'static str,
    anchor: &'static str,
    tolerance: f64,
    grid: Option<GridSpec>,
    parameters: Vec<(&'static str, Value)>,
}

impl Ctx<'_> {
    fn push(
        &mut self,
        check: &str,
        anchor: &str,
        result: CheckResult,
        tolerance: Option<f64>,
        pass: bool,
        flags: RuleFlags,
        grid: Option<GridSpec>,
        parameters: Vec<(&'static str, Value)>,
    ) {
        self.out.push(VerificationReport {
            schema: SCHEMA,
            check: check.to_string(),
            anchor: anchor.to_string(),
            parameters: parameters.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            result,
            tolerance,
            pass,
            flags,
            seed: self.config.seed,
            timestamp: self.timestamp,
            grid,
        });
    }

    fn numeric(&mut self, spec: Numeric, value: Result<f64>) {
        let (result, pass) = match value {
            Ok(v) => (CheckResult::Residual { value: v }, v <= spec.tolerance),
            Err(e) => (CheckResult::Error { message: e.to_string() }, false),
        };
        let flags = self.config.rules;
        self.push(spec.check, spec.anchor, result, Some(spec.tolerance), pass, flags, spec.grid, spec.parameters);
    }

    fn symbolic(
        &mut self,
        check: &str,
        anchor: &str,
        expected: String,
        actual: Result<String>,
        flags: RuleFlags,
        parameters: Vec<(&'static str, Value)>,
    ) {
        let (result, pass) = match actual {
            Ok(a) => {
                let pass = a == expected;
                (CheckResult::Symbolic { expected, actual: a }, pass)
            }
            Err(e) => (CheckResult::Error { message: e.to_string() }, false),
        };
        self.push(check, anchor, result, None, pass, flags, None, parameters);
    }

    fn rng(&self, check: &str) -> ChaCha8Rng {
        // FNV-1a keeps each check's stream independent of suite selection
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in check.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
        ChaCha8Rng::seed_from_u64(self.config.seed ^ h)
    }
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |a: f64, b| if b.is_nan() || a.is_nan() { f64::NAN } else { a.max(b) })
}

fn random_gaussian(rng: &mut ChaCha8Rng, spec: GridSpec) -> Result<GridFunction> {
    let center = rng.random_range(-1.0..1.0);
    let width = rng.random_range(0.7..1.3);
    let phase = Complex64::from_polar(1.0, rng.random_range(-PI..PI));
    Ok(GridFunction::gaussian(spec, center, width)?.scaled(phase))
}

fn random_vector(rng: &mut ChaCha8Rng, spec: GridSpec) -> Result<GridFunction> {
    let v = (0..spec.len()).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
    GridFunction::new(spec, v)
}

fn random_element(rng: &mut ChaCha8Rng, width: f64) -> FloatElement {
    FloatElement::scalar(rng.random_range(-width..width), rng.random_range(-width..width), rng.random_range(-PI..PI))
}

/// Largest relative worsening of `errors` beyond the roundoff `floor`:
/// nonpositive exactly when each error is at most the previous one or the floor.
pub fn monotone_excess(errors: &[f64], floor: f64) -> f64 {
    errors.windows(2).map(|w| w[1] - w[0].max(floor)).fold(f64::NEG_INFINITY, f64::max)
}

/// Largest ratio between consecutive errors.
pub fn worst_ratio(errors: &[f64]) -> f64 {
    errors.windows(2).map(|w| w[1] / w[0]).fold(f64::NEG_INFINITY, f64::max)
}

/// Worst error of the grid Gaussian coefficient against its closed form.
pub fn gaussian_oracle_error(spec: GridSpec, points: &[(f64, f64)]) -> Result<f64> {
    let gamma = GridFunction::gaussian(spec, 0.0, 1.0)?;
    let errs = points
        .iter()
        .map(|&(p, q)| {
            let v = matrix_coefficient(1.0, &gamma, &gamma, &FloatElement::scalar(p, q, 0.0))?;
            Ok((v - gaussian_coefficient(1.0, p, q, 0.0)).norm())
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(max_of(errs))
}

/// Width of the narrow Gaussian in the intertwiner refinement study, chosen so
/// the residual is above roundoff at the coarsest grid.
pub const REFINEMENT_WIDTH: f64 = 0.25;

fn unitarity(ctx: &mut Ctx) {
    let cfg = ctx.config.clone();
    let grid = cfg.grid;
    let mut rng = ctx.rng("unitarity.fractional-shift");
    let value = (|| {
        let mut worst = 0.0f64;
        for _ in 0..20 {
            let f = random_vector(&mut rng, grid)?;
            let g = fractional_shift(&f, rng.random_range(-grid.l..grid.l))?;
            worst = worst.max((g.norm() - f.norm()).abs() / f.norm());
        }
        Ok(worst)
    })();
    ctx.numeric(
        Numeric {
            check: "unitarity.fractional-shift",
            anchor: "‖f(· + a)‖ = ‖f‖",
            tolerance: cfg.tol.unitarity,
            grid: Some(grid),
            parameters: vec![("vectors", json!(20))],
        },
        value,
    );

    let mut rng = ctx.rng("unitarity.schrodinger");
    let value = (|| {
        let mut worst = 0.0f64;
        for _ in 0..20 {
            let f = random_vector(&mut rng, grid)?;
            let h = rng.random_range(0.2..3.0);
            let g = apply_schrodinger(h, &random_element(&mut rng, 3.0), &f)?;
            worst = worst.max((g.norm() - f.norm()).abs() / f.norm());
        }
        Ok(worst)
    })();
    ctx.numeric(
        Numeric {
            check: "unitarity.schrodinger",
            anchor: "rho_h(p,q,t) f(x) = e^{i(ht+qx)} f(x+hp) is unitary",
            tolerance: cfg.tol.unitarity,
            grid: Some(grid),
            parameters: vec![("vectors", json!(20))],
        },
        value,
    );

    let mut rng = ctx.rng("unitarity.fourier-plancherel");
    let value = (|| {
        let mut worst = 0.0f64;
        for _ in 0..10 {
            let f = random_vector(&mut rng, grid)?;
            let vf = fourier_plancherel(&f)?;
            worst = worst.max((vf.norm() - f.norm()).abs() / f.norm());
            worst = worst.max(fourier_plancherel_inverse(&vf)?.distance(&f)? / f.norm());
            worst = worst.max(fourier_plancherel(&fourier_plancherel_inverse(&f)?)?.distance(&f)? / f.norm());
        }
        Ok(worst)
    })();
    ctx.numeric(
        Numeric {
            check: "unitarity.fourier-plancherel",
            anchor: "V: L²(R) → L²(R) is the Fourier-Plancherel transform, V V* = I",
            tolerance: cfg.tol.plancherel,
            grid: Some(grid),
            parameters: vec![("vectors", json!(10))],
        },
        value,
    );

    let value = (|| {
        let gamma = GridFunction::gaussian(grid, 0.0, 1.0)?;
        fourier_plancherel(&gamma)?.distance(&GridFunction::gaussian(grid.dual(), 0.0, 1.0)?)
    })();
    ctx.numeric(
        Numeric {
            check: "unitarity.plancherel-gaussian",
            anchor: "V γ = γ for γ(x) = π^{-1/4} e^{-x²/2}",
            tolerance: cfg.tol.fourier,
            grid: Some(grid),
            parameters: vec![],
        },
        value,
    );

    let value = (|| {
        let bump = |x: f64| Complex64::new(haar_bump(&[x - 0.8]), 0.3 * haar_bump(&[x - 0.8]));
        let f = GridFunction::from_fn(grid, bump)?;
        let twice = fourier_plancherel(&fourier_plancherel(&f)?)?;
        Ok(twice.distance(&GridFunction::from_fn(grid, |x| bump(-x))?)? / f.norm())
    })();
    ctx.numeric(
        Numeric {
            check: "unitarity.plancherel-reflection",
            anchor: "V² f(x) = f(-x)",
            tolerance: cfg.tol.fourier,
            grid: Some(grid),
            parameters: vec![("test_function", json!("(1-(x-0.8)²/9)^6 (1+0.3i)"))],
        },
        value,
    );

    let plane = cfg.grid2;
    let mut rng = ctx.rng("unitarity.rotation-45");
    let shapes: Vec<((f64, f64), f64)> = (0..3)
        .map(|_| ((rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5)), rng.random_range(0.7..1.3)))
        .collect();
    let value = (|| {
        let mut worst = 0.0f64;
        for &(c, w) in &shapes {
            let f = GridFunction::gaussian2(plane, c, w)?;
            for dir in [Direction::Forward, Direction::Inverse] {
                worst = worst.max((rotation_45(&f, dir)?.norm() - f.norm()).abs() / f.norm());
            }
        }
        Ok(worst)
    })();
    ctx.numeric(
        Numeric {
            check: "unitarity.rotation-45",
            anchor: "W f(x,y) = f((x-y)/√2, (x+y)/√2) is orthogonal",
            tolerance: cfg.tol.rotation,
            grid: Some(plane),
            parameters: vec![("gaussians", json!(shapes))],
        },
        value,
    );

    let value = (|| {
        let mut worst = 0.0f64;
        for &(c, w) in &shapes {
            let f = GridFunction::gaussian2(plane, c, w)?;
            let back = rotation_45(&rotation_45(&f, Direction::Forward)?, Direction::Inverse)?;
            worst = worst.max(back.distance(&f)? / f.norm());
            let s2 = 2.0 * w * w;
            let exact = rotate_exact(
                plane,
                |x, y| Complex64::new((-((x - c.0).powi(2) + (y - c.1).powi(2)) / s2).exp() / (PI.sqrt() * w), 0.0),
                Direction::Forward,
            )?;
            worst = worst.max(rotation_45(&f, Direction::Forward)?.distance(&exact)? / f.norm());
        }
        let iso = GridFunction::gaussian2(plane, (0.0, 0.0), 1.0)?;
        worst = worst.max(rotation_45(&iso, Direction::Forward)?.distance(&iso)? / iso.norm());
        Ok(worst)
    })();
    ctx.numeric(
        Numeric {
            check: "unitarity.rotation-inverse",
            anchor: "W* W = I",
            tolerance: cfg.tol.rotation_inverse,
            grid: Some(plane),
            parameters: vec![("gaussians", json!(shapes))],
        },
        value,
    );
}

fn homomorphism(ctx: &mut Ctx) {
    let cfg = ctx.config.clone();
    let grid = cfg.grid;
    let mut rng = ctx.rng("homomorphism.schrodinger");
    let lattice = PI / grid.l;
    let value = (|| {
        let mut worst = 0.0f64;
        for _ in 0..100 {
            let h: f64 = rng.random_range(0.5..2.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            let el = |rng: &mut ChaCha8Rng| {
                FloatElement::scalar(
                    rng.random_range(-2.0..2.0) / h.abs(),
                    lattice * rng.random_range(-10i32..=10) as f64,
                    rng.random_range(-PI..PI),
                )
            };
            let (a, b) = (el(&mut rng), el(&mut rng));
            let f = random_gaussian(&mut rng, grid)?;
            let lhs = apply_schrodinger(h, &a, &apply_schrodinger(h, &b, &f)?)?;
            let rhs = apply_schrodinger(h, &a.multiply(&b)?, &f)?;
            worst = worst.max(lhs.distance(&rhs)?);
        }
        Ok(worst)
    })();
    ctx.numeric(
        Numeric {
            check: "homomorphism.schrodinger",
            anchor: "rho_h(g) rho_h(g') = rho_h(gg') with (p,q,t)(p',q',t') = (p+p', q+q', t+t'+p·q')",
            tolerance: cfg.tol.homomorphism,
            grid: Some(grid),
            parameters: vec![("pairs", json!(100)), ("q_lattice", json!(lattice))],
        },
        value,
    );
}

fn gaussian_points(rng: &mut ChaCha8Rng, count: usize) -> Vec<(f64, f64)> {
    (0..count).map(|_| (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0))).collect()
}

fn gaussian_oracle(ctx: &mut Ctx) {
    let cfg = ctx.config.clone();
    let grid = cfg.grid;
    let points = gaussian_points(&mut ctx.rng("gaussian-oracle.closed-form"), 50);
    let anchor = "⟨rho_1(p,q,0)γ, γ⟩ = exp(-p²/4 - q²/4 - ipq/2)";
    ctx.numeric(
        Numeric {
            check: "gaussian-oracle.closed-form",
            anchor,
            tolerance: cfg.tol.gaussian,
            grid: Some(grid),
            parameters: vec![("points", json!(50)), ("h", json!(1.0))],
        },
        gaussian_oracle_error(grid, &points),
    );

    let coarse = GridSpec { n: (grid.n / 2).max(8), ..grid };
    let specs = [coarse, coarse.refined(), coarse.refined().refined()];
    let errors: Result<Vec<f64>> = specs.iter().map(|s| gaussian_oracle_error(*s, &points)).collect();
    let params =
        |errors: &Result<Vec<f64>>, ns: Vec<usize>| vec![("N", json!(ns)), ("errors", json!(errors.as_ref().ok()))];
    let p = params(&errors, specs.iter().map(|s| s.n).collect());
    ctx.numeric(
        Numeric {
            check: "gaussian-oracle.refinement",
            anchor: "grid Gaussian coefficient error is nonincreasing as N doubles, down to roundoff",
            tolerance: 0.0,
            grid: Some(grid),
            parameters: [p, vec![("floor", json!(cfg.tol.floor))]].concat(),
        },
        errors.map(|e| monotone_excess(&e, cfg.tol.floor)),
    );

    let specs = [GridSpec { n: 32, ..grid }, GridSpec { n: 64, ..grid }, GridSpec { n: 128, ..grid }];
    let errors: Result<Vec<f64>> = specs.iter().map(|s| gaussian_oracle_error(*s, &points)).collect();
    let p = params(&errors, specs.iter().map(|s| s.n).collect());
    ctx.numeric(
        Numeric {
            check: "gaussian-oracle.under-resolved-refinement",
            anchor: "grid Gaussian coefficient error halves (or better) as N doubles while under-resolved",
            tolerance: 0.5,
            grid: Some(grid),
            parameters: p,
        },
        errors.map(|e| worst_ratio(&e)),
    );
}

fn central_character(ctx: &mut Ctx) {
    let cfg = ctx.config.clone();
    let grid = cfg.grid;
    let cases: [(&'static str, &'static str, f64, Option<f64>); 3] = [
        ("central-character.schrodinger", "rho_h(0,0,t) = e^{iht} I", 1.0, None),
        (
            "central-character.tensor-sum",
            "A_{rho_h} A_{rho_h'} ⊆ A_{rho_{h+h'}}: central character e^{i(h+h')t}",
            1.0,
            Some(2.0),
        ),
        ("central-character.tensor-conjugate", "A_{rho_h} A_{rho_-h} ⊆ A(H_n/Z) o q: constant in t", 1.0, Some(-1.0)),
    ];
    for (check, anchor, h, h2) in cases {
        let mut rng = ctx.rng(check);
        let ts: Vec<f64> = (0..20).map(|_| rng.random_range(-10.0..10.0)).collect();
        let value = (|| {
            let phi = match h2 {
                None => CoefficientFunction::schrodinger(
                    h,
                    random_gaussian(&mut rng, grid)?,
                    random_gaussian(&mut rng, grid)?,
                )?,
                Some(h2) => {
                    let mut v = || random_gaussian(&mut rng, grid);
                    CoefficientFunction::tensor(h, h2, [v()?, v()?], [v()?, v()?])?
                }
            };
            central_character_residual(&phi, phi.central_parameter(), &ts)
        })();
        let params = vec![("h", json!(h)), ("h2", json!(h2)), ("t_samples", json!(20))];
        ctx.numeric(Numeric { check, anchor, tolerance: cfg.tol.central, grid: Some(grid), parameters: params }, value);
    }
}

fn pd_gram(ctx: &mut Ctx) {
    let cfg = ctx.config.clone();
    let grid = cfg.grid;
    let mut rng = ctx.rng("pd-gram.diagonal");
    let xi = random_gaussian(&mut rng, grid).map_err(|e| e.to_string());
    let samples: Vec<Vec<FloatElement>> =
        (0..10).map(|_| (0..20).map(|_| random_element(&mut rng, 2.0)).collect()).collect();
    let value = (|| {
        let phi = CoefficientFunction::diagonal(1.0, xi.clone().map_err(Error::Grid)?)?;
        let mut worst = f64::INFINITY;
        for s in &samples {
            worst = worst.min(pd_gram_min_eig(&phi, s)?);
        }
        Ok(-worst)
    })();
    ctx.numeric(
        Numeric {
            check: "pd-gram.diagonal",
            anchor: "s ↦ ⟨rho_h(s)ξ, ξ⟩ is positive definite",
            tolerance: cfg.tol.pd,
            grid: Some(grid),
            parameters: vec![
                ("samples", json!(10)),
                ("points", json!(20)),
                ("quantity", json!("negated minimum eigenvalue")),
            ],
        },
        value,
    );

    let value = (|| {
        let xi = xi.clone().map_err(Error::Grid)?;
        let norm2 = xi.norm_sqr();
        let phi = CoefficientFunction::diagonal(1.0, xi)?.negated();
        Ok(pd_gram_min_eig(&phi, &samples[0])? + norm2)
    })();
    ctx.numeric(
        Numeric {
            check: "pd-gram.negated",
            anchor: "-⟨rho_h(s)ξ, ξ⟩ is not positive definite",
            tolerance: cfg.tol.pd,
            grid: Some(grid),
            parameters: vec![("points", json!(20)), ("quantity", json!("minimum eigenvalue plus ‖ξ‖²"))],
        },
        value,
    );

    let plane = cfg.grid2;
    let mut rng = ctx.rng("pd-gram.quotient");
    let sample: Vec<FloatElement> = (0..20).map(|_| random_element(&mut rng, 2.0)).collect();
    let value = (|| {
        let c = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let f = GridFunction::gaussian2(plane, c, rng.random_range(0.7..1.3))?;
        Ok(-pd_gram_min_eig(&CoefficientFunction::quotient_regular(f.clone(), f)?, &sample)?)
    })();
    ctx.numeric(
        Numeric {
            check: "pd-gram.quotient",
            anchor: "s ↦ ⟨lambda_{H/Z}(q(s))ξ, ξ⟩ is positive definite",
            tolerance: cfg.tol.pd,
            grid: Some(plane),
            parameters: vec![("points", json!(20)), ("quantity", json!("negated minimum eigenvalue"))],
        },
        value,
    );
}

fn tensor_product(ctx: &mut Ctx) {
    let cfg = ctx.config.clone();
    let line = GridSpec { dims: 1, ..cfg.grid2 };
    let mut rng = ctx.rng("tensor-product.factorization");
    let value = (|| {
        let mut worst = 0.0f64;
        for (h, h2) in [(1.0, 2.0), (1.0, -1.0), (-0.5, 1.5)] {
            let mut v = || random_gaussian(&mut rng, line);
            let (x1, e1, x2, e2) = (v()?, v()?, v()?, v()?);
            for _ in 0..4 {
                let g = random_element(&mut rng, 1.5);
                let prod = tensor_coefficient(h, h2, [&x1, &e1, &x2, &e2], &g)?;
                let direct = apply_schrodinger_pair(h, h2, &g, &x1.outer(&x2)?)?.inner(&e1.outer(&e2)?)?;
                worst = worst.max((prod - direct).norm());
            }
        }
        Ok(worst)
    })();
    ctx.numeric(
        Numeric {
            check: "tensor-product.factorization",
            anchor: "span A_pi A_sigma = A_{pi ⊗ sigma}",
            tolerance: cfg.tol.tensor,
            grid: Some(cfg.grid2),
            parameters: vec![("pairs", json!([[1.0, 2.0], [1.0, -1.0], [-0.5, 1.5]]))],
        },
        value,
    );

    for (check, anchor, h2, phase) in [
        ("tensor-product.conjugate", "rho_h ⊗ rho_{-h} ≅ lambda_{H/Z} o q", -1.0, 0.0),
        ("tensor-product.same-sign", "(rho_h ⊗ rho_h)(0,0,t) = e^{2iht} I", 1.0, 2.0),
    ] {
        let mut rng = ctx.rng(check);
        let value = (|| {
            let mut v = || random_gaussian(&mut rng, line);
            let (x1, e1, x2, e2) = (v()?, v()?, v()?, v()?);
            let mut worst = 0.0f64;
            for _ in 0..10 {
                let g = random_element(&mut rng, 1.5);
                let t = rng.random_range(-10.0..10.0);
                let moved = FloatElement::scalar(g.p()[0], g.q()[0], g.t() + t);
                let a = tensor_coefficient(1.0, h2, [&x1, &e1, &x2, &e2], &g)?;
                let b = tensor_coefficient(1.0, h2, [&x1, &e1, &x2, &e2], &moved)?;
                worst = worst.max((b - Complex64::from_polar(1.0, phase * t) * a).norm());
            }
            Ok(worst)
        })();
        ctx.numeric(
            Numeric {
                check,
                anchor,
                tolerance: cfg.tol.tensor,
                grid: Some(line),
                parameters: vec![("h", json!(1.0)), ("h2", json!(h2))],
            },
            value,
        );
    }
}

/// Random admissible `(h, g, f)` for the intertwiner on `plane`.
pub fn intertwiner_triple(rng: &mut ChaCha8Rng, plane: GridSpec) -> Result<(f64, FloatElement, GridFunction)> {
    let h = rng.random_range(0.5..1.5) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    let g = FloatElement::scalar(
        rng.random_range(-1.0..1.0),
        PI / plane.l * rng.random_range(-4i32..=4) as f64,
        rng.random_range(-PI..PI),
    );
    let c = (rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5));
    let f = GridFunction::gaussian2(plane, c, rng.random_range(0.7..1.3))?
        .scaled(Complex64::from_polar(1.0, rng.random_range(-PI..PI)));
    Ok((h, g, f))
}

/// Residuals of the intertwiner for a narrow Gaussian at `N/2`, `N`, `2N`.
pub fn intertwiner_refinement(plane: GridSpec) -> Result<Vec<f64>> {
    let g = FloatElement::scalar(0.5, 3.0 * PI / plane.l, 0.0);
    let coarse = GridSpec { n: (plane.n / 2).max(8), ..plane };
    [coarse, coarse.refined(), coarse.refined().refined()]
        .iter()
        .map(|s| intertwiner_residual(1.0, &g, &GridFunction::gaussian2(*s, (0.0, 0.0), REFINEMENT_WIDTH)?))
        .collect()
}

fn intertwiner(ctx: &mut Ctx) {
    let cfg = ctx.config.clone();
    let plane = cfg.grid2;
    let anchor = "W (rho_h ⊗ rho_-h)(g) W* = (V ⊗ I) lambda_{R×R}(√2q, √2hp) (V* ⊗ I)";
    let mut rng = ctx.rng("intertwiner.random");
    let value = (|| {
        let mut worst = 0.0f64;
        for _ in 0..10 {
            let (h, g, f) = intertwiner_triple(&mut rng, plane)?;
            worst = worst.max(intertwiner_residual(h, &g, &f)?);
        }
        Ok(worst)
    })();
    ctx.numeric(
        Numeric {
            check: "intertwiner.random",
            anchor,
            tolerance: cfg.tol.intertwiner,
            grid: Some(plane),
            parameters: vec![("triples", json!(10))],
        },
        value,
    );

    let mut rng = ctx.rng("intertwiner.trivial");
    let value = (|| {
        let (h, _, f) = intertwiner_triple(&mut rng, plane)?;
        let at_identity = intertwiner_residual(h, &FloatElement::identity(1), &f)?;
        let central = intertwiner_residual(h, &FloatElement::central(1, rng.random_range(-PI..PI)), &f)?;
        Ok(at_identity.max(central))
    })();
    ctx.numeric(
        Numeric {
            check: "intertwiner.trivial",
            anchor: "(rho_h ⊗ rho_-h)(0,0,t) = I",
            tolerance: cfg.tol.trivial,
            grid: Some(plane),
            parameters: vec![("elements", json!(["identity", "central"]))],
        },
        value,
    );

    let errors = intertwiner_refinement(plane);
    let ns: Vec<usize> = (0..3).map(|k| (plane.n / 2).max(8) << k).collect();
    let params = vec![("N", json!(ns)), ("width", json!(REFINEMENT_WIDTH)), ("residuals", json!(errors.as_ref().ok()))];
    ctx.numeric(
        Numeric {
            check: "intertwiner.refinement",
            anchor: "intertwiner residual halves (or better) as N doubles",
            tolerance: 0.5,
            grid: Some(plane),
            parameters: params,
        },
        errors.map(|e| worst_ratio(&e)),
    );
}

fn haar(ctx: &mut Ctx) {
    let cfg = ctx.config.clone();
    let grid: HaarGrid = cfg.haar.clone();
    let shifts = haar_shifts();
    let residuals = |grid: &HaarGrid| -> Result<Vec<f64>> {
        shifts.iter().map(|s| haar_invariance_residual(haar_bump, s, grid)).collect()
    };
    let coarse = residuals(&grid);
    let anchor = "Lebesgue measure dp dq dt is a Haar measure on H_n";
    let shift_list: Vec<String> = shifts.iter().map(ToString::to_string).collect();
    let params = vec![
        ("shifts", json!(shift_list)),
        ("points", json!(grid.points)),
        ("half_width", json!(grid.half_width)),
        ("residuals", json!(coarse.as_ref().ok())),
    ];
    ctx.numeric(
        Numeric { check: "haar.invariance", anchor, tolerance: cfg.tol.haar, grid: None, parameters: params },
        match &coarse {
            Ok(c) => Ok(max_of(c.iter().copied())),
            Err(e) => Err(Error::Grid(e.to_string())),
        },
    );

    let fine = residuals(&grid.refined());
    let value = coarse.and_then(|c| {
        let f = fine?;
        Ok(max_of(c.iter().zip(&f).map(|(a, b)| b / a)))
    });
    ctx.numeric(
        Numeric {
            check: "haar.refinement",
            anchor: "Haar quadrature residual halves (or better) under refinement",
            tolerance: 0.5,
            grid: None,
            parameters: vec![("points", json!([grid.points, grid.points * 2]))],
        },
        value,
    );
}

fn parse(text: &str) -> Component {
    text.parse().expect("built-in component")
}

fn fusion_rules(ctx: &mut Ctx) {
    let on = RuleFlags::default();
    let off = RuleFlags { trivial_identity: false, ..on };
    let cases: [(Rule, bool, &str, &str, &str, &str); 13] = [
        (Rule::CharacterProduct, true, "chi(1;2)", "chi(-1/2;1)", "chi(1/2;3)", "equality"),
        (Rule::CharacterSchrodinger, true, "chi(2;-1)", "rho(3/2)", "rho(3/2)", "equality"),
        (Rule::SchrodingerSum, true, "rho(1/2)", "rho(1/2)", "rho(1)", "equality"),
        (Rule::SchrodingerConjugate, true, "rho(1)", "rho(-1)", "A(G/Z)oq", "equality"),
        (Rule::CharacterQuotient, true, "AF", "A(G/Z)oq", "A(G/Z)oq", "equality"),
        (Rule::QuotientSchrodinger, true, "A(G/Z)oq", "rho(2)", "rho(2)", "equality"),
        (Rule::QuotientProduct, true, "A(G/Z)oq", "A(G/Z)oq", "A(G/Z)oq", "equality"),
        (Rule::TrivialProduct, false, "triv", "triv", "C1", "equality"),
        (Rule::TrivialIdentity, false, "triv", "kappa(-1/3)", "kappa(-1/3)", "equality"),
        (Rule::TrivialGeneric, false, "triv", "kappa(-1/3)", "Areg+ ⊕ Areg- ⊕ AregD", "quasi-containment"),
        (
            Rule::ComplementaryPair,
            false,
            "kappa(-9/10)",
            "kappa(-4/5)",
            "Areg+ ⊕ Areg- ⊕ AregD ⊕ kappa(-7/10)",
            "quasi-containment",
        ),
        (Rule::GenericPair, false, "pi+(1)", "delta-(3)", "Areg+ ⊕ Areg- ⊕ AregD", "quasi-containment"),
        (Rule::RegularAbsorbs, false, "Areg+", "pi-(1/2)", "Areg+ ⊕ Areg- ⊕ AregD", "quasi-containment"),
    ];
    for (rule, heisenberg, a, b, product, relation) in cases {
        let flags = if rule == Rule::TrivialGeneric { off } else { on };
        let mut rules = if heisenberg { RuleSet::heisenberg(1) } else { RuleSet::sl2r() };
        rules.flags = flags;
        let expected = format!("{product} [{relation}: {}]", rule.name());
        let actual = fuse_components(&parse(a), &parse(b), &rules).map(|r| r.to_string());
        let check = format!("fusion-rules.{}", rule.name());
        ctx.symbolic(
            &check,
            rule.statement(),
            expected,
            actual,
            flags,
            vec![("left", json!(a)), ("right", json!(b)), ("group", json!(rules.group))],
        );
    }
}

fn heisenberg_algebra(ctx: &mut Ctx) {
    let rules = RuleSet::heisenberg(1)
        .with_trivial_identity(ctx.config.rules.trivial_identity)
        .with_regular_absorbs(ctx.config.rules.regular_absorbs);
    let actual = generated_algebra(&[Component::heisenberg_pure()], &rules).map(|c| c.to_string());
    ctx.symbolic(
        "heisenberg-algebra.generate",
        "a(H_n) = A_R ⊕ A(H_n/Z) o q ⊕ A_F(H_n)",
        "rho{h!=0} ⊕ A(G/Z)oq ⊕ AF".into(),
        actual,
        rules.flags,
        vec![("seeds", json!(Component::heisenberg_pure().to_string()))],
    );
}

fn sl2_expected() -> Component {
    Component::sl2_pure().union(&Component::sl2_regular())
}

fn sl2_algebra(ctx: &mut Ctx) {
    let rules = RuleSet::sl2r()
        .with_trivial_identity(ctx.config.rules.trivial_identity)
        .with_regular_absorbs(ctx.config.rules.regular_absorbs);
    let actual = generated_algebra(&[Component::sl2_pure()], &rules).map(|c| c.to_string());
    ctx.symbolic(
        "sl2-algebra.generate",
        "a(SL2(R)) = a_0(SL2(R)) ⊕ A(SL2(R))",
        sl2_expected().to_string(),
        actual,
        rules.flags,
        vec![("seeds", json!(Component::sl2_pure().to_string()))],
    );
}

fn span2(ctx: &mut Ctx) {
    for (check, anchor, trivial, expected) in [
        (
            "span2.trivial-identity-off",
            "span a(SL2(R)) a(SL2(R)) = A_kappa ⊕ C1 ⊕ A(SL2(R)) with 1 treated as generic",
            false,
            "Areg+ ⊕ Areg- ⊕ AregD ⊕ kappa{-1<s<0} ⊕ C1".to_string(),
        ),
        (
            "span2.trivial-identity-on",
            "span a(SL2(R)) a(SL2(R)) = a(SL2(R)) when 1 (x) pi = pi",
            true,
            sl2_expected().to_string(),
        ),
    ] {
        let rules =
            RuleSet::sl2r().with_trivial_identity(trivial).with_regular_absorbs(ctx.config.rules.regular_absorbs);
        let actual = generated_algebra(&[Component::sl2_pure()], &rules)
            .and_then(|a| span_of_products(&a, &a, &rules))
            .map(|c| c.to_string());
        ctx.symbolic(check, anchor, expected, actual, rules.flags, vec![]);
    }
}

fn ideal(ctx: &mut Ctx) {
    let flags = ctx.config.rules;
    let cases = [
        (
            "ideal.heisenberg",
            "A_R ⊕ A(H_n/Z) o q is an ideal in a(H_n)",
            RuleSet::heisenberg(1),
            Component::heisenberg_pure(),
            "rho{h!=0} ⊕ A(G/Z)oq",
            "true",
        ),
        (
            "ideal.heisenberg-almost-periodic",
            "A_F(H_n) is not an ideal in a(H_n)",
            RuleSet::heisenberg(1),
            Component::heisenberg_pure(),
            "AF",
            "false",
        ),
        (
            "ideal.sl2r",
            "A(SL2(R)) is an ideal in a(SL2(R))",
            RuleSet::sl2r(),
            Component::sl2_pure(),
            "Areg+ ⊕ Areg- ⊕ AregD",
            "true",
        ),
    ];
    for (check, anchor, rules, seeds, candidate, expected) in cases {
        let rules = rules.with_trivial_identity(flags.trivial_identity).with_regular_absorbs(flags.regular_absorbs);
        let actual = generated_algebra(&[seeds], &rules)
            .and_then(|a| ideal_check(&parse(candidate), &a, &rules))
            .map(|b| b.to_string());
        ctx.symbolic(check, anchor, expected.into(), actual, rules.flags, vec![("candidate", json!(candidate))]);
    }
}

fn ceil_inverse_sigma(s: &str) -> Result<usize> {
    let s = parse_rational(s)?;
    let one = crate::group::Rational::from_integer(1.into());
    (one.clone() / (s + one))
        .ceil()
        .to_integer()
        .to_usize()
        .ok_or_else(|| Error::InvalidParameter("power overflow".into()))
}

fn min_power(ctx: &mut Ctx) {
    let rules = RuleSet::sl2r()
        .with_trivial_identity(ctx.config.rules.trivial_identity)
        .with_regular_absorbs(ctx.config.rules.regular_absorbs);
    let params = ["-1/2", "-3/4", "-9/10", "-99/100"];
    let expected: Result<Vec<String>> = params.iter().map(|s| ceil_inverse_sigma(s).map(|n| n.to_string())).collect();
    let actual: Result<Vec<String>> = params
        .iter()
        .map(|s| {
            let power = min_power_to_regular(&parse(&format!("kappa({s})")), &rules)?.power;
            Ok(power.map_or("none".into(), |n| n.to_string()))
        })
        .collect();
    let expected = expected.map(|v| v.join(",")).unwrap_or_else(|e| e.to_string());
    ctx.symbolic(
        "min-power.complementary",
        "A_{kappa_s}^n ⊆ A(SL2(R)) exactly when n ≥ 1/(1+s)",
        expected,
        actual.map(|v| v.join(",")),
        rules.flags,
        vec![("s", json!(params))],
    );

    let mixed = [("kappa(-9/10) ⊕ delta+(2)", "10"), ("pi+(1)", "2")];
    let actual: Result<Vec<String>> = mixed
        .iter()
        .map(|(c, _)| Ok(min_power_to_regular(&parse(c), &rules)?.power.map_or("none".into(), |n| n.to_string())))
        .collect();
    let expected = mixed.iter().map(|(_, e)| *e).collect::<Vec<_>>().join(",");
    ctx.symbolic(
        "min-power.mixed",
        "the smallest complementary parameter decides the power of a finite sum",
        expected,
        actual.map(|v| v.join(",")),
        rules.flags,
        vec![("components", json!(mixed.iter().map(|(c, _)| *c).collect::<Vec<_>>()))],
    );
}

fn spectrum(ctx: &mut Ctx) {
    let flags = ctx.config.rules;
    let cases = [
        ("spectrum.heisenberg", "Φ_{a(H_n)} = H_n ⊔ H~_n ⊔ H_n^ap", SpectrumGroup::Heisenberg(1), "H_1 via identity (visible: rho{h!=0} ⊕ A(G/Z)oq ⊕ AF); H~_1 via gamma~ (visible: rho{h!=0} ⊕ A(G/Z)oq); H_1^ap via gamma_ap (visible: AF)"),
        ("spectrum.sl2r", "Φ_{a(SL2(R))} = SL2(R)_∞, the one-point compactification", SpectrumGroup::Sl2r, "SL2(R) via identity (visible: Areg+ ⊕ Areg- ⊕ AregD ⊕ pi+{t>=0} ⊕ pi-{t>0} ⊕ kappa{-1<s<0} ⊕ delta+{n>=2} ⊕ delta-{n>=2} ⊕ delta+(1) ⊕ delta-(1) ⊕ C1); infinity via one-point (visible: C1)"),
        ("spectrum.moore", "Φ_{a(G)} = G^ap for Moore groups", SpectrumGroup::Moore, "G^ap via gamma_ap (visible: AF)"),
    ];
    for (check, anchor, group, expected) in cases {
        let actual = spectrum_layers(group).iter().map(ToString::to_string).collect::<Vec<_>>().join("; ");
        ctx.symbolic(check, anchor, expected.into(), Ok(actual), flags, vec![]);
    }
}

fn now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

/// Run `suites`, returning reports sorted by check name.
pub fn run_suites(suites: &[Suite], config: &Config) -> Vec<VerificationReport> {
    run_suites_at(suites, config, now())
}

pub fn run_suites_at(suites: &[Suite], config: &Config, timestamp: u64) -> Vec<VerificationReport> {
    let mut ctx = Ctx { config, timestamp, out: Vec::new() };
    for suite in suites {
        match suite {
            Suite::Unitarity => unitarity(&mut ctx),
            Suite::Homomorphism => homomorphism(&mut ctx),
            Suite::GaussianOracle => gaussian_oracle(&mut ctx),
            Suite::CentralCharacter => central_character(&mut ctx),
            Suite::PdGram => pd_gram(&mut ctx),
            Suite::TensorProduct => tensor_product(&mut ctx),
            Suite::Intertwiner => intertwiner(&mut ctx),
            Suite::Haar => haar(&mut ctx),
            Suite::FusionRules => fusion_rules(&mut ctx),
            Suite::HeisenbergAlgebra => heisenberg_algebra(&mut ctx),
            Suite::Sl2Algebra => sl2_algebra(&mut ctx),
            Suite::Span2 => span2(&mut ctx),
            Suite::Ideal => ideal(&mut ctx),
            Suite::MinPower => min_power(&mut ctx),
            Suite::Spectrum => spectrum(&mut ctx),
        }
    }
    let mut out = ctx.out;
    out.sort_by(|a, b| a.check.cmp(&b.check));
    out
}

pub fn to_json(reports: &[VerificationReport]) -> Result<String> {
    serde_json::to_string_pretty(reports).map_err(|e| Error::Config(format!("serializing report: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert_eq!(Suite::parse_list("all").unwrap().len(), Suite::ALL.len());
        assert_eq!(Suite::parse_list("haar,unitarity,haar").unwrap(), vec![Suite::Unitarity, Suite::Haar]);
        assert!(Suite::parse_list("nope").is_err());
        assert!(Suite::parse_list("").is_err());
    }

    #[test]
    fn refinement_measures() {
        assert!(monotone_excess(&[1e-3, 1e-6, 1e-9], 1e-13) <= 0.0);
        assert!(monotone_excess(&[6e-16, 1e-15, 1.7e-15], 1e-13) <= 0.0);
        assert!(monotone_excess(&[1e-6, 1e-5, 1e-7], 1e-13) > 0.0);
        assert_eq!(worst_ratio(&[1.0, 0.25, 0.1]), 0.4);
    }

    #[test]
    fn symbolic_suites_pass() {
        let config = Config::default();
        let suites = [
            Suite::FusionRules,
            Suite::HeisenbergAlgebra,
            Suite::Sl2Algebra,
            Suite::Span2,
            Suite::Ideal,
            Suite::MinPower,
            Suite::Spectrum,
        ];
        let reports = run_suites_at(&suites, &config, 0);
        for r in &reports {
            assert!(r.pass, "{r}: {:?}", r.result);
        }
        let names: Vec<&str> = reports.iter().map(|r| r.check.as_str()).collect();
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
    }

    #[test]
    fn reports_are_reproducible() {
        let config = Config::default();
        let a = to_json(&run_suites_at(&[Suite::CentralCharacter, Suite::MinPower], &config, 5)).unwrap();
        let b = to_json(&run_suites_at(&[Suite::MinPower, Suite::CentralCharacter], &config, 5)).unwrap();
        assert_eq!(a, b);
        assert!(a.contains("\"schema\": 1"));
    }

    #[test]
    fn failures_are_reported_not_raised() {
        let mut config = Config::default();
        config.grid = GridSpec { n: 64, l: 3.0, dims: 1 };
        let reports = run_suites_at(&[Suite::GaussianOracle], &config, 0);
        let closed = reports.iter().find(|r| r.check == "gaussian-oracle.closed-form").unwrap();
        assert!(!closed.pass);
    }

    #[test]
    fn every_check_has_one_anchor() {
        let mut config = Config::default();
        config.grid = GridSpec { n: 128, l: 10.0, dims: 1 };
        config.grid2 = GridSpec { n: 64, l: 12.0, dims: 2 };
        config.haar = HaarGrid { points: 12, ..HaarGrid::default() };
        let reports = run_suites_at(&Suite::ALL, &config, 0);
        let mut anchors = BTreeMap::new();
        for r in &reports {
            assert!(!r.anchor.is_empty(), "{}", r.check);
            assert!(anchors.insert(r.check.clone(), r.anchor.clone()).is_none(), "duplicate {}", r.check);
        }
        for suite in Suite::ALL {
            assert!(reports.iter().any(|r| r.check.starts_with(&format!("{}.", suite.name()))), "{suite}");
        }
    }
}
