use std::io::Write;

use curvspp::analytics::{
    cylinder_ktheta, cylinder_kz, cylinder_momentum_ellipse, cylinder_paraxial_potential, sphere_keff, CylinderCase,
};
use curvspp::greens::default_m_max;
use curvspp::scan::{run_scan, ScanReport};
use curvspp::{
    GreensSolver, MaterialPair, MaterialTable, Orientation, ScanConfig, ScanKind, SolverSettings, SpheroidSurface,
    SppScalars,
};
use num_complex::Complex64;
use serde::Serialize;

use crate::args::{DispersionArgs, DispersionShape, GreenArgs, MaterialArgs, MaterialsArgs, ScanArgs, ScanKindArg};
use crate::output::{complex, header_comment, number, sink, VERSION};
use crate::Failure;

/// Golden-ratio deviation below which the anisotropic term is reported as vanishing.
const GOLDEN_TOLERANCE: f64 = 1e-6;

/// The resolved material as recorded in output headers.
#[derive(Debug, Clone, Serialize)]
struct MaterialInfo {
    eps_d: f64,
    eps_m: Complex64,
    lambda0_nm: f64,
    lambda_bar_spp_nm: f64,
    table_entry: Option<String>,
}

fn resolve_material(args: &MaterialArgs) -> Result<(SppScalars, MaterialInfo), Failure> {
    let eps_m = match (&args.eps_m, &args.material, &args.material_file) {
        (Some(e), _, _) => *e,
        (None, Some(name), Some(path)) => MaterialTable::load(path)?
            .lookup(name, args.lambda0)
            .ok_or_else(|| {
                Failure::Validation(format!(
                    "no entry for {name} at {} nm in {}",
                    args.lambda0,
                    path.display()
                ))
            })?,
        _ => {
            return Err(Failure::Validation(
                "give --eps-m or both --material-file and --material".into(),
            ))
        }
    };
    let scalars = MaterialPair::new(args.eps_d, eps_m, args.lambda0)?.scalars();
    let info = MaterialInfo {
        eps_d: args.eps_d,
        eps_m,
        lambda0_nm: args.lambda0,
        lambda_bar_spp_nm: scalars.lambda_bar_spp,
        table_entry: args.material.clone(),
    };
    Ok((scalars, info))
}

fn orientation(concave: bool) -> Orientation {
    if concave {
        Orientation::Concave
    } else {
        Orientation::Convex
    }
}

#[derive(Serialize)]
struct MaterialsReport {
    eps_d: f64,
    eps_m: Complex64,
    lambda0_nm: f64,
    k0: f64,
    k_spp: Complex64,
    lambda_bar_spp_nm: f64,
    n_e: Complex64,
    kappa_d: Complex64,
    kappa_m: Complex64,
    c_h: Complex64,
    c_sigma: Complex64,
    k_spp_lossless_sq: f64,
    k_loss: f64,
    c0: Complex64,
    c0_loss_ratio: f64,
    golden_ratio_deviation: f64,
    anisotropic_potential_vanishes: bool,
    near_resonance: bool,
}

pub fn materials(args: &MaterialsArgs) -> Result<(), Failure> {
    let (sc, _) = resolve_material(&args.material)?;
    let pair = sc.pair;
    let deviation = pair.golden_ratio_deviation();
    let report = MaterialsReport {
        eps_d: pair.eps_d(),
        eps_m: pair.eps_m(),
        lambda0_nm: pair.lambda0(),
        k0: pair.k0(),
        k_spp: sc.k_spp,
        lambda_bar_spp_nm: sc.lambda_bar_spp,
        n_e: sc.n_e,
        kappa_d: sc.kappa_d,
        kappa_m: sc.kappa_m,
        c_h: sc.c_h,
        c_sigma: sc.c_sigma,
        k_spp_lossless_sq: sc.k_spp_lossless_sq,
        k_loss: sc.k_loss,
        c0: sc.c0,
        c0_loss_ratio: sc.c0_loss_ratio,
        golden_ratio_deviation: deviation,
        anisotropic_potential_vanishes: deviation < GOLDEN_TOLERANCE,
        near_resonance: sc.near_resonance,
    };
    let mut out = sink(None)?;
    if args.json {
        serde_json::to_writer_pretty(&mut out, &report)?;
        writeln!(out)?;
    } else {
        writeln!(out, "eps_d                   {}", report.eps_d)?;
        writeln!(out, "eps_m                   {}", complex(report.eps_m))?;
        writeln!(out, "lambda0 (nm)            {}", report.lambda0_nm)?;
        writeln!(out, "k0 (1/nm)               {:.6e}", report.k0)?;
        writeln!(out, "k_spp (1/nm)            {}", complex(report.k_spp))?;
        writeln!(out, "lambda_bar_spp (nm)     {:.4}", report.lambda_bar_spp_nm)?;
        writeln!(out, "n_e                     {}", complex(report.n_e))?;
        writeln!(out, "kappa_d (1/nm)          {}", complex(report.kappa_d))?;
        writeln!(out, "kappa_m (1/nm)          {}", complex(report.kappa_m))?;
        writeln!(out, "C_H (1/nm)              {}", complex(report.c_h))?;
        writeln!(out, "C_sigma (nm)            {}", complex(report.c_sigma))?;
        writeln!(out, "k_spp^2 lossless (1/nm2) {:.6e}", report.k_spp_lossless_sq)?;
        writeln!(out, "K_loss (1/nm2)          {:.6e}", report.k_loss)?;
        writeln!(out, "C0 (1/nm)               {}", complex(report.c0))?;
        writeln!(out, "Im C0 / Re C0 (1st ord) {:.6}", report.c0_loss_ratio)?;
        writeln!(out, "golden-ratio deviation  {:.6e}", report.golden_ratio_deviation)?;
        if report.anisotropic_potential_vanishes {
            writeln!(out, "note: anisotropic potential vanishes (eps_m = -phi^2 eps_d)")?;
        }
        if report.near_resonance {
            writeln!(out, "note: near the surface plasmon resonance; curvature expansion unreliable")?;
        }
    }
    out.flush()?;
    Ok(())
}

#[derive(Serialize)]
#[serde(tag = "shape", rename_all = "kebab-case")]
enum DispersionReport {
    Sphere {
        radius_nm: f64,
        orientation: Orientation,
        k_spp: Complex64,
        k_eff_expanded: Complex64,
        k_eff_unexpanded: Complex64,
        relative_correction: Complex64,
    },
    Cylinder {
        radius_nm: f64,
        orientation: Orientation,
        v_param: Complex64,
        paraxial_potential: f64,
        ellipse_coef_kz2: Complex64,
        ellipse_coef_ktheta2: Complex64,
        ellipse_rhs: Complex64,
        eccentricity: f64,
        m: i64,
        k_z: Complex64,
        k_z_evanescent: bool,
        k_theta: Complex64,
        k_theta_evanescent: bool,
    },
}

pub fn dispersion(args: &DispersionArgs) -> Result<(), Failure> {
    let (sc, _) = resolve_material(&args.material)?;
    let radius = args.radius * sc.lambda_bar_spp;
    let o = orientation(args.concave);
    let report = match args.shape {
        DispersionShape::Sphere => {
            let k = sphere_keff(&sc, radius, o)?;
            DispersionReport::Sphere {
                radius_nm: radius,
                orientation: o,
                k_spp: sc.k_spp,
                k_eff_expanded: k.expanded,
                k_eff_unexpanded: k.unexpanded,
                relative_correction: k.relative_correction,
            }
        }
        DispersionShape::Cylinder => {
            let case = CylinderCase::new(&sc, radius, o)?;
            let ellipse = cylinder_momentum_ellipse(&sc, radius, o)?;
            let kz = cylinder_kz(&sc, radius, args.m, o)?;
            let kt = cylinder_ktheta(&sc, radius, o)?;
            DispersionReport::Cylinder {
                radius_nm: radius,
                orientation: o,
                v_param: case.v_param,
                paraxial_potential: cylinder_paraxial_potential(&sc, radius)?,
                ellipse_coef_kz2: ellipse.coef_kz2,
                ellipse_coef_ktheta2: ellipse.coef_ktheta2,
                ellipse_rhs: ellipse.rhs,
                eccentricity: ellipse.eccentricity(),
                m: args.m,
                k_z: kz.value,
                k_z_evanescent: kz.evanescent,
                k_theta: kt.value,
                k_theta_evanescent: kt.evanescent,
            }
        }
    };
    let mut out = sink(None)?;
    if args.json {
        serde_json::to_writer_pretty(&mut out, &report)?;
        writeln!(out)?;
    } else {
        match &report {
            DispersionReport::Sphere {
                radius_nm,
                k_spp,
                k_eff_expanded,
                k_eff_unexpanded,
                relative_correction,
                ..
            } => {
                writeln!(out, "radius (nm)          {radius_nm:.6e}")?;
                writeln!(out, "k_spp (1/nm)         {}", complex(*k_spp))?;
                writeln!(out, "k_eff expanded       {}", complex(*k_eff_expanded))?;
                writeln!(out, "k_eff unexpanded     {}", complex(*k_eff_unexpanded))?;
                writeln!(out, "relative correction  {}", complex(*relative_correction))?;
            }
            DispersionReport::Cylinder {
                radius_nm,
                v_param,
                paraxial_potential,
                ellipse_coef_kz2,
                ellipse_coef_ktheta2,
                ellipse_rhs,
                eccentricity,
                m,
                k_z,
                k_z_evanescent,
                k_theta,
                k_theta_evanescent,
                ..
            } => {
                let tag = |e: bool| if e { " (evanescent)" } else { "" };
                writeln!(out, "radius (nm)          {radius_nm:.6e}")?;
                writeln!(out, "V                    {}", complex(*v_param))?;
                writeln!(out, "paraxial potential   {paraxial_potential:.6e}")?;
                writeln!(out, "ellipse k_z^2 coef   {}", complex(*ellipse_coef_kz2))?;
                writeln!(out, "ellipse k_th^2 coef  {}", complex(*ellipse_coef_ktheta2))?;
                writeln!(out, "ellipse rhs (1/nm2)  {}", complex(*ellipse_rhs))?;
                writeln!(out, "eccentricity         {eccentricity:.6e}")?;
                writeln!(out, "k_z (m = {m}) (1/nm)  {}{}", complex(*k_z), tag(*k_z_evanescent))?;
                writeln!(out, "k_theta (1/nm)       {}{}", complex(*k_theta), tag(*k_theta_evanescent))?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct GreenConfig<'a> {
    material: &'a MaterialInfo,
    a_nm: f64,
    c_nm: f64,
    orientation: Orientation,
    theta0: f64,
    m_max: usize,
    ablation: curvspp::Ablation,
    settings: SolverSettings,
}

pub fn green(args: &GreenArgs) -> Result<(), Failure> {
    let (sc, info) = resolve_material(&args.material)?;
    let lb = sc.lambda_bar_spp;
    let surface = SpheroidSurface::new(args.a * lb, args.c.unwrap_or(args.a) * lb, orientation(args.concave))?;
    if args.points == 0 {
        return Err(Failure::Validation("--points must be at least 1".into()));
    }
    let theta_end = args.theta_end.unwrap_or(args.theta_start);
    let dphi_end = args.dphi_end.unwrap_or(args.dphi_start);
    let path: Vec<(f64, f64)> = (0..args.points)
        .map(|i| {
            let t = if args.points == 1 {
                0.0
            } else {
                i as f64 / (args.points - 1) as f64
            };
            (
                args.theta_start + t * (theta_end - args.theta_start),
                args.dphi_start + t * (dphi_end - args.dphi_start),
            )
        })
        .collect();
    let reach = args.theta_start.max(theta_end);
    let m_max = args.m_max.unwrap_or_else(|| default_m_max(&sc, &surface, reach, 1));
    let settings = args.solver.settings();
    settings.validate()?;
    let ablation = args.solver.ablation();
    let solver = GreensSolver::new(&surface, &sc, args.theta0, reach, m_max, ablation, &settings)?;
    let rows = path
        .iter()
        .map(|&(theta, dphi)| solver.evaluate(theta, dphi).map(|g| (theta, dphi, g)))
        .collect::<Result<Vec<_>, _>>()?;

    let config = GreenConfig {
        material: &info,
        a_nm: surface.a(),
        c_nm: surface.c(),
        orientation: surface.orientation(),
        theta0: args.theta0,
        m_max,
        ablation,
        settings,
    };
    let mut out = sink(args.out.as_deref())?;
    header_comment(&mut out, "green", &config)?;
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(["theta", "dphi", "re_G", "im_G", "tail_estimate"])?;
    for (theta, dphi, g) in rows {
        wtr.write_record([
            number(theta),
            number(dphi),
            number(g.value.re),
            number(g.value.im),
            number(g.tail_estimate),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct ScanHeader<'a> {
    material: &'a MaterialInfo,
    config: &'a ScanConfig,
}

#[derive(Serialize)]
struct PointSummary<'a> {
    param: f64,
    m_max: Option<usize>,
    theta0: Option<f64>,
    error: Option<&'a str>,
}

#[derive(Serialize)]
struct Sidecar<'a> {
    version: &'a str,
    command: &'a str,
    material: &'a MaterialInfo,
    config: &'a ScanConfig,
    warnings: &'a [String],
    failures: usize,
    points: Vec<PointSummary<'a>>,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    version: &'a str,
    material: &'a MaterialInfo,
    #[serde(flatten)]
    report: &'a ScanReport,
}

fn scan_config(args: &ScanArgs) -> Result<ScanConfig, Failure> {
    let (kind, range) = match args.kind {
        ScanKindArg::SphereCurvature => {
            if args.a.is_some() {
                return Err(Failure::Validation(
                    "--a applies to spheroid-aspect scans only".into(),
                ));
            }
            (ScanKind::SphereCurvature, (-0.08, 0.08))
        }
        ScanKindArg::SpheroidAspect => (
            ScanKind::SpheroidAspect {
                a_reduced: args.a.unwrap_or(62.5),
            },
            (0.05, 2.0),
        ),
    };
    let config = ScanConfig {
        kind,
        scan_min: args.scan_min.unwrap_or(range.0),
        scan_max: args.scan_max.unwrap_or(range.1),
        steps: args.steps,
        n_emitters: args.n,
        spacing_reduced: args.spacing,
        ablation: args.solver.ablation(),
        settings: args.solver.settings(),
        m_max_blocks: args.m_max_blocks,
        window_shape: args.window.into(),
    };
    config.validate()?;
    Ok(config)
}

fn write_scan_csv(out: Box<dyn Write>, info: &MaterialInfo, report: &ScanReport) -> Result<(), Failure> {
    let mut out = out;
    header_comment(
        &mut out,
        "scan",
        &ScanHeader {
            material: info,
            config: &report.config,
        },
    )?;
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record([
        "scan_param",
        "k_index",
        "gamma_norm",
        "delta_norm",
        "sum_rule_residual",
        "m_max",
        "error",
    ])?;
    let n = report.config.n_emitters;
    for point in &report.points {
        let param = number(point.param);
        match (&point.spectrum, &point.error) {
            (Some(spec), _) => {
                let residual = number(spec.sum_rule_residual());
                let m_max = spec.window.m_max().to_string();
                for k in 0..n {
                    wtr.write_record([
                        param.as_str(),
                        &k.to_string(),
                        &number(spec.gamma_norm[k]),
                        &number(spec.delta_norm[k]),
                        &residual,
                        &m_max,
                        "",
                    ])?;
                }
            }
            (None, error) => {
                let nan = number(f64::NAN);
                let message = error.as_deref().unwrap_or("unknown failure");
                for k in 0..n {
                    wtr.write_record([param.as_str(), &k.to_string(), &nan, &nan, &nan, &nan, message])?;
                }
            }
        }
    }
    wtr.flush()?;
    Ok(())
}

pub fn scan(args: &ScanArgs) -> Result<(), Failure> {
    let (sc, info) = resolve_material(&args.material)?;
    let config = scan_config(args)?;
    let report = run_scan(&config, &sc)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }

    let out = sink(args.out.as_deref())?;
    if args.json {
        let mut out = out;
        let full = JsonReport {
            version: VERSION,
            material: &info,
            report: &report,
        };
        serde_json::to_writer_pretty(&mut out, &full)?;
        writeln!(out)?;
        out.flush()?;
    } else {
        write_scan_csv(out, &info, &report)?;
        if let Some(path) = &args.out {
            let sidecar = Sidecar {
                version: VERSION,
                command: "scan",
                material: &info,
                config: &report.config,
                warnings: &report.warnings,
                failures: report.failures(),
                points: report
                    .points
                    .iter()
                    .map(|p| PointSummary {
                        param: p.param,
                        m_max: p.spectrum.as_ref().map(|s| s.window.m_max()),
                        theta0: p.spectrum.as_ref().map(|s| s.theta0),
                        error: p.error.as_deref(),
                    })
                    .collect(),
            };
            let mut side = sink(Some(&path.with_extension("json")))?;
            serde_json::to_writer_pretty(&mut side, &sidecar)?;
            writeln!(side)?;
            side.flush()?;
        }
    }

    let failures = report.failures();
    if failures == report.points.len() {
        let first = report.points[0].error.as_deref().unwrap_or("unknown failure");
        return Err(Failure::Solver(format!(
            "all {failures} scan points failed; first: {first}"
        )));
    }
    if failures > 0 {
        eprintln!("warning: {failures} of {} scan points failed", report.points.len());
    }
    Ok(())
}
