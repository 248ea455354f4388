//! Batch front end: load algebra files, run associativity checks,
//! contractions, K-deformations and Bianchi classification, evaluate the
//! phase-space and Fock verification suites, and emit JSON reports (plus
//! optional CSV convergence tables).

mod report;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use report::{CheckOutcome, RunReport, EXIT_USAGE};
use serde_json::json;
use starcon_core::catalog::{self, BianchiType, Fixture};
use starcon_core::contraction::{contract_limit, k_deform, ContractionError};
use starcon_core::format::{transform_spec, AlgebraFile};
use starcon_core::{
    check_associativity, parse_expr, AlgebraElement, GaussRat, Params, StructureTensor,
};
use starcon_kernels::fock::{
    kernel_trace, quantizer_pair, trace_product, weyl_displacement, FockSpace,
};
use starcon_kernels::grid::{PhasePoint, QuadGrid};
use starcon_kernels::kernel::{fresnel_weak_limit, groenewold_eval};
use starcon_kernels::symbol::{moyal_product, poisson_bracket, PolySymbol};
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "starcon",
    about = "Structure-constant contraction engine: exact algebra checks and phase-space kernel verification",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct FileArgs {
    /// Algebra JSON file.
    #[arg(long)]
    file: PathBuf,
    /// Parameter substitution name=value (repeatable, exact rationals).
    #[arg(long = "param", value_name = "NAME=VALUE")]
    params: Vec<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Verify the quadratic associativity equations of an algebra file.
    Check(FileArgs),
    /// Contract along the file's transform family at its critical value.
    Contract {
        #[command(flatten)]
        file: FileArgs,
        /// Override the critical parameter value from the file.
        #[arg(long)]
        critical: Option<String>,
    },
    /// Deform the product with a fixed algebra element K.
    Kdeform {
        #[command(flatten)]
        file: FileArgs,
        /// Comma-separated coordinate expressions of K.
        #[arg(long)]
        kvector: String,
    },
    /// Classify a three-dimensional Lie bracket into its Bianchi type.
    Classify(FileArgs),
    /// Star-multiply two polynomial symbols.
    Moyal {
        /// Left factor, e.g. "q1^2 + p1".
        #[arg(long)]
        f: String,
        /// Right factor.
        #[arg(long)]
        g: String,
        /// Degrees of freedom.
        #[arg(long, default_value_t = 1)]
        dofs: usize,
        /// Substitute a deformation parameter, e.g. h1=0 (repeatable).
        #[arg(long = "param", value_name = "HK=VALUE")]
        params: Vec<String>,
    },
    /// Closed-form weak hbar -> 0 limit table of the kernel.
    KernelLimit {
        /// hbar value (repeatable for sweeps).
        #[arg(long = "hbar", required = true)]
        hbars: Vec<f64>,
        /// Gaussian test-function width.
        #[arg(long, default_value_t = 1.0)]
        width: f64,
        /// Write the convergence table as CSV.
        #[arg(long = "csv-out")]
        csv_out: Option<PathBuf>,
    },
    /// Run the truncated-Fock verification suite.
    FockVerify {
        #[arg(long, default_value_t = 64)]
        dim: usize,
        #[arg(long, default_value_t = 1.0)]
        hbar: f64,
        /// Half-width of the phase-space box.
        #[arg(long = "box", default_value_t = 3.0)]
        box_half: f64,
        /// Grid nodes per axis (odd).
        #[arg(long, default_value_t = 61)]
        grid: usize,
        #[arg(long, default_value_t = 1e-2)]
        tolerance: f64,
    },
    /// List or export the built-in fixtures.
    Catalog {
        #[command(subcommand)]
        action: CatalogCmd,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    /// Enumerate fixture names and their parameters.
    List,
    /// Export a fixture as an algebra JSON file.
    Export {
        #[arg(long)]
        name: String,
        #[arg(long = "param", value_name = "NAME=VALUE")]
        params: Vec<String>,
        /// Output path; the document is embedded in the report if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Anything that should abort with a usage/input error (exit 2).
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

fn parse_assignments(pairs: &[String]) -> Result<BTreeMap<String, GaussRat>, UsageError> {
    let mut out = BTreeMap::new();
    for p in pairs {
        let Some((name, value)) = p.split_once('=') else {
            return Err(UsageError(format!("--param needs NAME=VALUE, got `{p}`")));
        };
        let expr = parse_expr(value, &Params::empty())
            .map_err(|e| UsageError(format!("bad value for parameter `{name}`: {e}")))?;
        let c = expr
            .as_constant()
            .ok_or_else(|| UsageError(format!("parameter `{name}` must be a constant")))?;
        out.insert(name.trim().to_string(), c);
    }
    Ok(out)
}

fn load_tensor(args: &FileArgs, report: &mut RunReport) -> Result<(AlgebraFile, StructureTensor), UsageError> {
    report.input("file", args.file.display());
    let file = AlgebraFile::read(&args.file)?;
    let mut tensor = file.tensor()?;
    let assignment = parse_assignments(&args.params)?;
    for (k, v) in &assignment {
        report.input(&format!("param.{k}"), v);
    }
    if !assignment.is_empty() {
        tensor = tensor.substitute(&assignment)?;
    }
    Ok((file, tensor))
}

fn associativity_outcome(t: &StructureTensor) -> CheckOutcome {
    let rep = check_associativity(t);
    if rep.holds {
        CheckOutcome::pass("associativity")
    } else {
        let shown: Vec<_> = rep.violations.iter().take(20).collect();
        CheckOutcome::fail(
            "associativity",
            json!({
                "violations": shown,
                "violation_count": rep.violations.len(),
            }),
        )
    }
}

fn tensor_details(t: &StructureTensor) -> serde_json::Value {
    serde_json::to_value(AlgebraFile::from_tensor(t, None)).expect("serializable")
}

fn cmd_check(args: FileArgs) -> Result<RunReport, UsageError> {
    let mut report = RunReport::new("check");
    let (_, tensor) = load_tensor(&args, &mut report)?;
    report.push(associativity_outcome(&tensor));
    Ok(report)
}

fn cmd_contract(args: FileArgs, critical: Option<String>) -> Result<RunReport, UsageError> {
    let mut report = RunReport::new("contract");
    let (file, tensor) = load_tensor(&args, &mut report)?;
    let Some((family, file_critical)) = file.transform()? else {
        return Err(UsageError("the file carries no transform family".into()));
    };
    let critical = match critical {
        None => file_critical,
        Some(text) => parse_expr(&text, &Params::empty())
            .ok()
            .and_then(|e| e.as_constant())
            .ok_or_else(|| UsageError(format!("bad critical value `{text}`")))?,
    };
    report.input("critical", &critical);
    report.input("transform.param", family.param());
    match contract_limit(&tensor, &family, &critical) {
        Ok(outcome) => {
            let mut check = associativity_outcome(&outcome.tensor);
            check.name = "contracted_associativity".into();
            report.push(CheckOutcome::pass("limit_exists").with_details(json!({
                "algebra": tensor_details(&outcome.tensor),
            })));
            report.push(check);
        }
        Err(ContractionError::LimitDoesNotExist { entries }) => {
            report.push(CheckOutcome::fail(
                "limit_exists",
                json!({ "divergent_entries": entries }),
            ));
        }
        Err(other) => return Err(other.into()),
    }
    Ok(report)
}

fn cmd_kdeform(args: FileArgs, kvector: String) -> Result<RunReport, UsageError> {
    let mut report = RunReport::new("kdeform");
    let (_, tensor) = load_tensor(&args, &mut report)?;
    report.input("kvector", &kvector);
    let coords: Result<Vec<_>, _> = kvector
        .split(',')
        .map(|text| parse_expr(text.trim(), tensor.params()))
        .collect();
    let coords = coords.map_err(|e| UsageError(format!("bad K coordinate: {e}")))?;
    if coords.len() != tensor.dim() {
        return Err(UsageError(format!(
            "K has {} coordinates, the algebra has dimension {}",
            coords.len(),
            tensor.dim()
        )));
    }
    let k = AlgebraElement::new(tensor.params().clone(), coords);
    let deformed = k_deform(&tensor, &k)?;
    let mut check = associativity_outcome(&deformed);
    check.name = "deformed_associativity".into();
    check.details = Some(json!({ "algebra": tensor_details(&deformed) }));
    report.push(check);
    Ok(report)
}

fn cmd_classify(args: FileArgs) -> Result<RunReport, UsageError> {
    let mut report = RunReport::new("classify");
    let (_, tensor) = load_tensor(&args, &mut report)?;
    match catalog::bianchi_classify(&tensor) {
        Ok(ty) => {
            let (label, h) = match &ty {
                BianchiType::VIh(h) => ("VI_h".to_string(), Some(h.to_string())),
                BianchiType::VIIh(h) => ("VII_h".to_string(), Some(h.to_string())),
                other => (other.to_string(), None),
            };
            let mut details = json!({ "type": label });
            if let Some(h) = h {
                details["h"] = json!(h);
            }
            report.push(CheckOutcome::pass("bianchi_classification").with_details(details));
        }
        Err(e) => {
            report.push(CheckOutcome::fail(
                "bianchi_classification",
                json!({ "error": e.to_string() }),
            ));
        }
    }
    Ok(report)
}

fn cmd_moyal(f: String, g: String, dofs: usize, params: Vec<String>) -> Result<RunReport, UsageError> {
    let mut report = RunReport::new("moyal");
    report.input("f", &f);
    report.input("g", &g);
    report.input("dofs", dofs);
    let fs = PolySymbol::parse(&f, dofs)?;
    let gs = PolySymbol::parse(&g, dofs)?;
    let mut star = moyal_product(&fs, &gs)?;
    let mut star_rev = moyal_product(&gs, &fs)?;
    let assignment = parse_assignments(&params)?;
    let mut subs = Vec::new();
    for (name, value) in &assignment {
        let Some(k) = name.strip_prefix('h').and_then(|s| s.parse::<usize>().ok()) else {
            return Err(UsageError(format!(
                "only deformation parameters h1..h{dofs} can be substituted, got `{name}`"
            )));
        };
        report.input(&format!("param.{name}"), value);
        subs.push((k, value.clone()));
    }
    if !subs.is_empty() {
        star = star.set_hbar(&subs)?;
        star_rev = star_rev.set_hbar(&subs)?;
    }
    let commutator = &star - &star_rev;
    let poisson = poisson_bracket(&fs, &gs)?;
    report.push(CheckOutcome::pass("star_product").with_details(json!({
        "f_star_g": star.to_string(),
        "g_star_f": star_rev.to_string(),
        "commutator": commutator.to_string(),
        "poisson_bracket": poisson.to_string(),
    })));
    Ok(report)
}

fn cmd_kernel_limit(
    hbars: Vec<f64>,
    width: f64,
    csv_out: Option<PathBuf>,
) -> Result<RunReport, UsageError> {
    let mut report = RunReport::new("kernel-limit");
    report.input("width", width);
    let mut rows = Vec::new();
    for &hbar in &hbars {
        let v = fresnel_weak_limit(hbar, width)?;
        let err = (v - Complex64::new(1.0, 0.0)).norm();
        rows.push((hbar, v, err));
    }
    rows.sort_by(|a, b| b.0.partial_cmp(&a.0).expect("finite hbar"));
    if let Some(path) = &csv_out {
        let mut csv = String::from("hbar,value_re,value_im,abs_error\n");
        for (h, v, e) in &rows {
            csv.push_str(&format!(
                "{},{},{},{}\n",
                report::sig12(*h),
                report::sig12(v.re),
                report::sig12(v.im),
                report::sig12(*e)
            ));
        }
        std::fs::write(path, csv)?;
        report.input("csv_out", path.display());
    }
    let table: Vec<_> = rows
        .iter()
        .map(|(h, v, e)| {
            json!({
                "hbar": report::sig12(*h),
                "value_re": report::sig12(v.re),
                "value_im": report::sig12(v.im),
                "abs_error": report::sig12(*e),
            })
        })
        .collect();
    let monotone = rows.windows(2).all(|w| w[1].2 < w[0].2);
    let slope = if rows.len() >= 2 {
        let first = rows.first().expect("nonempty");
        let last = rows.last().expect("nonempty");
        Some(report::sig12(
            (first.2.log10() - last.2.log10()) / (first.0.log10() - last.0.log10()),
        ))
    } else {
        None
    };
    let mut outcome = CheckOutcome::measured(
        "weak_limit_error_monotone",
        monotone || rows.len() < 2,
        rows.last().map(|r| r.2).unwrap_or(0.0),
    );
    outcome.details = Some(json!({ "table": table, "log_log_slope": slope }));
    report.push(outcome);
    Ok(report)
}

/// Deterministic sample triples inside the trusted box.
fn sample_triples(scale: f64) -> Vec<[PhasePoint; 3]> {
    // Low-discrepancy-ish fixed pattern, scaled to the requested box.
    let raw: [[f64; 6]; 20] = [
        [0.30, -0.20, -0.50, 0.60, 0.10, 0.40],
        [1.00, 0.50, 0.40, -0.80, -0.60, 0.20],
        [-1.20, 0.90, 0.70, 1.10, 0.30, -0.50],
        [0.80, 0.80, -0.80, -0.80, 0.00, 0.00],
        [1.50, 0.00, 0.00, 1.50, -1.50, 0.00],
        [0.25, 1.30, -1.10, 0.45, 0.95, -0.35],
        [-0.70, -0.70, 0.70, 0.70, 1.40, -1.40],
        [0.15, -0.95, 1.25, 0.05, -0.45, 1.05],
        [-1.35, 0.25, 0.55, -1.15, 0.85, 0.65],
        [0.50, 0.50, 0.50, -0.50, -0.50, 0.50],
        [1.10, -0.30, -0.20, 0.90, 0.60, -1.30],
        [-0.90, 1.20, 1.30, -0.60, -0.10, 0.30],
        [0.05, 0.05, -0.05, -0.05, 0.10, -0.10],
        [1.45, 1.45, -1.45, 1.45, 1.45, -1.45],
        [0.65, -1.25, -0.35, 0.15, 1.05, 0.95],
        [-0.55, -0.15, 0.95, -0.75, -1.25, 0.35],
        [0.20, 0.60, 0.60, 0.20, -0.40, -0.40],
        [1.00, -1.00, 0.50, 0.50, -1.00, 1.00],
        [-0.25, 0.75, -0.75, -0.25, 0.25, 0.25],
        [0.90, 0.10, 0.10, 0.90, 0.50, 0.50],
    ];
    raw.iter()
        .map(|r| {
            [
                PhasePoint::new(r[0] * scale, r[1] * scale),
                PhasePoint::new(r[2] * scale, r[3] * scale),
                PhasePoint::new(r[4] * scale, r[5] * scale),
            ]
        })
        .collect()
}

fn cmd_fock_verify(
    dim: usize,
    hbar: f64,
    box_half: f64,
    grid: usize,
    tolerance: f64,
) -> Result<RunReport, UsageError> {
    let mut report = RunReport::new("fock-verify");
    report.input("dim", dim);
    report.input("hbar", hbar);
    report.input("box", box_half);
    report.input("grid", grid);
    report.input("tolerance", tolerance);
    if dim < 4 {
        return Err(UsageError("need at least 4 Fock levels".into()));
    }
    if !(hbar > 0.0) {
        return Err(UsageError("hbar must be positive".into()));
    }
    let quad = QuadGrid::new(box_half, grid)?;
    let space = FockSpace::new(dim);
    let block = dim / 2;

    // Ladder commutator: identity except the documented corner entry.
    {
        let comm = space.annihilation() * space.creation() - space.creation() * space.annihilation();
        let mut max_err = 0.0_f64;
        for r in 0..dim {
            for c in 0..dim {
                let want = if r == c {
                    if r == dim - 1 { -((dim - 1) as f64) } else { 1.0 }
                } else {
                    0.0
                };
                max_err = max_err.max((comm[(r, c)] - Complex64::new(want, 0.0)).norm());
            }
        }
        report.push(CheckOutcome::measured("ladder_commutator", max_err < 1e-10, max_err));
    }

    // Displacement unitarity on the leading block.
    {
        let mut max_err = 0.0_f64;
        for z in [Complex64::new(1.0, 0.5), Complex64::new(-0.4, 1.2)] {
            let w = weyl_displacement(&space, z);
            let winv = weyl_displacement(&space, -z);
            let prod = &w.mat * &winv.mat;
            for r in 0..block {
                for c in 0..block {
                    let want = if r == c { 1.0 } else { 0.0 };
                    max_err = max_err.max((prod[(r, c)] - Complex64::new(want, 0.0)).norm());
                }
            }
        }
        report.push(CheckOutcome::measured("displacement_unitarity", max_err < 1e-8, max_err));
    }

    // Coherent-state column of W(z).
    {
        let z = Complex64::new(0.9, -0.6);
        let w = weyl_displacement(&space, z);
        let mut fact = 1.0_f64;
        let mut max_err = 0.0_f64;
        for n in 0..block {
            if n > 0 {
                fact *= n as f64;
            }
            let want = (-(z.norm_sqr()) / 2.0).exp() * z.powu(n as u32) / fact.sqrt();
            max_err = max_err.max((w.mat[(n, 0)] - want).norm());
        }
        report.push(CheckOutcome::measured("coherent_column", max_err < 1e-10, max_err));
    }

    // Quantizer scale relation D = U / (2 pi hbar).
    {
        let pair = quantizer_pair(&space, PhasePoint::new(0.4, -0.7), hbar)?;
        let rescaled = pair.u.scale(Complex64::new(1.0 / (2.0 * std::f64::consts::PI * hbar), 0.0));
        let err = (&pair.d.mat - &rescaled.mat).norm();
        report.push(CheckOutcome::measured("quantizer_scale_relation", err < 1e-12, err));
    }

    // Kernel trace against the closed-form kernel.
    {
        let scale = (box_half / 2.0).min(1.5);
        let mut max_rel = 0.0_f64;
        for [x1, x2, x3] in sample_triples(scale) {
            let got = kernel_trace(&space, x1, x2, x3, hbar)?;
            let want = groenewold_eval(x1, x2, x3, hbar)?;
            max_rel = max_rel.max((got - want).norm() / want.norm());
        }
        report.push(CheckOutcome::measured(
            "kernel_vs_groenewold",
            max_rel < tolerance,
            max_rel,
        ));
    }

    // Hermitian operators have real symbols.
    {
        let herm = space.position() * space.position() + space.momentum() * space.momentum();
        let herm = starcon_kernels::fock::FockOperator { mat: herm };
        let pts: Vec<PhasePoint> = (-3..=3)
            .map(|i| PhasePoint::new(i as f64 * 0.3, -i as f64 * 0.2))
            .collect();
        let sym = starcon_kernels::fock::symbol_of(&space, &herm, &pts, hbar)?;
        let max_im = sym.iter().map(|v| v.im.abs()).fold(0.0, f64::max);
        report.push(CheckOutcome::measured("hermitian_symbol_real", max_im < 1e-10, max_im));
    }

    // Biorthogonality: grid-smeared delta reproduces a smooth probe.
    {
        let w2 = 0.25_f64 * 0.25;
        let probe = move |q: f64, p: f64| (-(q * q + p * p) / w2).exp();
        let eval_points = [
            PhasePoint::origin(),
            PhasePoint::new(0.2, 0.2),
            PhasePoint::new(0.5, -0.25),
            PhasePoint::new(-0.3, -0.9),
        ];
        let us: Vec<_> = eval_points
            .iter()
            .map(|&x| quantizer_pair(&space, x, hbar).map(|p| p.u.mat))
            .collect::<Result<_, _>>()?;
        let mut recon = vec![Complex64::new(0.0, 0.0); eval_points.len()];
        let n = quad.points_per_axis();
        for iq in 0..n {
            for ip in 0..n {
                let (q, p) = (quad.node(iq), quad.node(ip));
                let d = quantizer_pair(&space, PhasePoint::new(q, p), hbar)?.d;
                let w = quad.weight(iq, ip) * probe(q, p);
                for (k, u) in us.iter().enumerate() {
                    recon[k] += trace_product(u, &d.mat) * w;
                }
            }
        }
        let max_err = eval_points
            .iter()
            .zip(&recon)
            .map(|(x, got)| (got - Complex64::new(probe(x.q, x.p), 0.0)).norm())
            .fold(0.0, f64::max);
        report.push(CheckOutcome::measured(
            "biorthogonality_probe",
            max_err < tolerance,
            max_err,
        ));
    }

    Ok(report)
}

fn cmd_catalog(action: CatalogCmd) -> Result<RunReport, UsageError> {
    match action {
        CatalogCmd::List => {
            let mut report = RunReport::new("catalog-list");
            let mut details = serde_json::Map::new();
            for name in catalog::FIXTURE_NAMES {
                let params = catalog::fixture_params(name)?;
                details.insert(name.to_string(), json!(params));
            }
            report.push(CheckOutcome::pass("fixtures").with_details(details.into()));
            Ok(report)
        }
        CatalogCmd::Export { name, params, out } => {
            let mut report = RunReport::new("catalog-export");
            report.input("name", &name);
            let assignment = parse_assignments(&params)?;
            for (k, v) in &assignment {
                report.input(&format!("param.{k}"), v);
            }
            let document = match catalog::fixture(&name, &assignment)? {
                Fixture::Matrices(mats) => {
                    let rows: Vec<Vec<Vec<String>>> = mats
                        .iter()
                        .map(|m| {
                            (0..m.rows())
                                .map(|r| {
                                    (0..m.cols()).map(|c| m.get(r, c).to_string()).collect()
                                })
                                .collect()
                        })
                        .collect();
                    json!({ "matrices": rows })
                }
                Fixture::Tensor(tensor) => {
                    // The u(2) fixture ships with its contraction family so
                    // `contract --file u2.json` works out of the box.
                    let file = if name == "u2" {
                        let lp = Params::new(["lambda"]);
                        let promoted = tensor.promote(&lp)?;
                        let family = catalog::u2_transform(&lp);
                        let spec = transform_spec(&family, &GaussRat::zero());
                        AlgebraFile::from_tensor(&promoted, Some(&spec))
                    } else {
                        AlgebraFile::from_tensor(&tensor, None)
                    };
                    serde_json::to_value(&file).expect("serializable")
                }
            };
            match out {
                Some(path) => {
                    std::fs::write(
                        &path,
                        serde_json::to_string_pretty(&document).expect("serializable") + "\n",
                    )?;
                    report.input("out", path.display());
                    report.push(CheckOutcome::pass("exported"));
                }
                None => {
                    report.push(CheckOutcome::pass("exported").with_details(document));
                }
            }
            Ok(report)
        }
    }
}

fn run(cmd: Cmd) -> Result<RunReport, UsageError> {
    match cmd {
        Cmd::Check(args) => cmd_check(args),
        Cmd::Contract { file, critical } => cmd_contract(file, critical),
        Cmd::Kdeform { file, kvector } => cmd_kdeform(file, kvector),
        Cmd::Classify(args) => cmd_classify(args),
        Cmd::Moyal { f, g, dofs, params } => cmd_moyal(f, g, dofs, params),
        Cmd::KernelLimit { hbars, width, csv_out } => cmd_kernel_limit(hbars, width, csv_out),
        Cmd::FockVerify { dim, hbar, box_half, grid, tolerance } => {
            cmd_fock_verify(dim, hbar, box_half, grid, tolerance)
        }
        Cmd::Catalog { action } => cmd_catalog(action),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(report) => ExitCode::from(report.emit() as u8),
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE as u8)
        }
    }
}
