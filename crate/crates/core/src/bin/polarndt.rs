use clap::{Args, Parser, Subcommand, ValueEnum};
use polarndt::detection::{
    default_bins, detection_report, fft_phase_bins, pca_components, DetectionMap, ImageStack, ReportConfig,
    StackOrigin,
};
use polarndt::dofp::{process_stack, GuidedParams, Interpolation, PipelineConfig};
use polarndt::eval::{cnr_between, edge_sharpness};
use polarndt::io::{self, format_sig9, Creation};
use polarndt::radiometry::{
    dolp_full, dolp_mixture, dolp_simplified, fit_dolp_curve, CurveModel, FitOptions, MaterialDb,
    QuadratureConfig, RadiometricScene,
};
use polarndt::synth::{render_mosaic_sequence, SynthFile};
use polarndt::{Error, LabelMask, Result};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "polarndt", version, about = "Infrared polarization NDT toolkit")]
struct Cli {
    /// Random seed (overrides the seed of a synth spec).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for frame-parallel stages (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Material table overriding or extending the built-in materials.
    #[arg(long, global = true)]
    materials: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// DoLP-vs-angle sweeps as CSV.
    Simulate(SimulateArgs),
    /// Render a synthetic specimen to a mosaic bundle with truth.
    Synth(SynthArgs),
    /// Mosaic bundle to DoLP (and intensity) float bundles.
    Process(ProcessArgs),
    /// Detection maps from a float bundle.
    Detect(DetectArgs),
    /// Fit alpha to DoLP-vs-angle samples.
    Fit(FitArgs),
    /// CNR and edge sharpness of maps against a truth mask.
    Metrics(MetricsArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum SimModel {
    Simplified,
    Full,
    Mixture,
}

#[derive(Args)]
struct SimulateArgs {
    /// Comma-separated material names.
    #[arg(long, default_value = "aluminum")]
    material: String,
    /// Comma-separated alpha values.
    #[arg(long, default_value = "0.5")]
    alpha: String,
    /// Angle range `start:stop:step` in degrees, stop inclusive.
    #[arg(long, default_value = "0:89:1")]
    angles: String,
    #[arg(long, value_enum, default_value = "simplified")]
    model: SimModel,
    /// Subsurface material for the mixture model.
    #[arg(long)]
    subsurface: Option<String>,
    /// Zenith / azimuth node count for the full model.
    #[arg(long, default_value_t = 64)]
    nodes: usize,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SynthArgs {
    /// Specimen + config JSON; built-in default specimen when omitted.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Output bundle directory.
    #[arg(long, short)]
    out: Option<PathBuf>,
    #[arg(long)]
    frames: Option<usize>,
    /// Observation angle in degrees.
    #[arg(long)]
    angle: Option<f64>,
    /// Per-channel noise std in counts.
    #[arg(long)]
    sigma: Option<f64>,
    /// Print the effective spec JSON and exit.
    #[arg(long)]
    print_spec: bool,
}

#[derive(Args)]
struct ProcessArgs {
    /// Mosaic bundle (directory or manifest).
    #[arg(long, short)]
    input: PathBuf,
    /// DoLP bundle directory.
    #[arg(long, short)]
    out: PathBuf,
    /// Also write the four-channel-mean intensity bundle here.
    #[arg(long)]
    intensity_out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "bilinear")]
    interpolation: InterpArg,
    /// Skip guided filtering.
    #[arg(long)]
    no_guided: bool,
    #[arg(long, default_value_t = 4)]
    radius: usize,
    /// Guided-filter eps (default: (0.01 * guide range)^2 per frame).
    #[arg(long)]
    eps: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum InterpArg {
    Bilinear,
    Bicubic,
}

#[derive(Clone, Copy, ValueEnum)]
enum DetectMethod {
    Fft,
    Pca,
    Report,
}

#[derive(Args)]
struct DetectArgs {
    /// Float bundle (directory or manifest).
    #[arg(long, short)]
    input: PathBuf,
    /// Output directory for maps.
    #[arg(long, short)]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "report")]
    method: DetectMethod,
    /// Comma-separated DFT bins (default: nearest to 0.23, 2.51, 4.8 Hz).
    #[arg(long)]
    bins: Option<String>,
    #[arg(long, default_value_t = 2)]
    pcs: usize,
    /// Frame window `start:end` (end exclusive).
    #[arg(long)]
    window: Option<String>,
    /// Also write amplitude maps (fft method).
    #[arg(long)]
    amplitude: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FitModel {
    Simplified,
    Mixture,
}

#[derive(Args)]
struct FitArgs {
    /// CSV with `psi_i_deg,dolp` rows (header optional).
    #[arg(long, short)]
    input: PathBuf,
    #[arg(long, default_value = "cfrp")]
    material: String,
    #[arg(long, value_enum, default_value = "simplified")]
    model: FitModel,
    #[arg(long)]
    subsurface: Option<String>,
    #[arg(long, default_value_t = 0.1)]
    ceiling: f64,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MetricsArgs {
    /// Directory of `.fmap` maps with JSON sidecars, or individual maps.
    #[arg(long, required = true, num_args = 1..)]
    maps: Vec<PathBuf>,
    /// Synthetic bundle (or its truth bundle) providing the label mask.
    #[arg(long)]
    truth: PathBuf,
    /// Observation angle recorded in the report (default: from the bundle spec).
    #[arg(long)]
    angle: Option<f64>,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = e.to_string().replace('\n', " ");
            eprintln!("error: {}: {msg}", e.kind());
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::Domain("--threads must be >= 1".into()));
        }
        #[cfg(feature = "parallel")]
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Domain(format!("thread pool: {e}")))?;
    }
    let db = match &cli.materials {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| match e.kind() {
                std::io::ErrorKind::NotFound => Error::MissingFile(p.clone()),
                _ => Error::Domain(format!("{}: {e}", p.display())),
            })?;
            MaterialDb::builtin_with_overrides(&text)?
        }
        None => MaterialDb::builtin(),
    };
    match cli.command {
        Command::Simulate(a) => simulate(a, &db),
        Command::Synth(a) => synth(a, cli.seed, &db),
        Command::Process(a) => process(a),
        Command::Detect(a) => detect(a),
        Command::Fit(a) => fit(a, &db),
        Command::Metrics(a) => metrics(a),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => io::write_atomic(p, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|v| {
            v.trim()
                .parse()
                .map_err(|_| Error::Domain(format!("cannot parse {what} `{v}`")))
        })
        .collect()
}

fn parse_angles(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<f64> = s
        .split(':')
        .map(|v| v.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Domain(format!("cannot parse angle range `{s}`")))?;
    let (a, b, step) = match parts.as_slice() {
        [a] => (*a, *a, 1.0),
        [a, b] => (*a, *b, 1.0),
        [a, b, s] => (*a, *b, *s),
        _ => return Err(Error::Domain(format!("angle range `{s}` must be start:stop:step"))),
    };
    if !(step > 0.0) || b < a || a < 0.0 || b > 90.0 {
        return Err(Error::Domain(format!("angle range `{s}` must satisfy 0 <= start <= stop <= 90, step > 0")));
    }
    let n = ((b - a) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| a + i as f64 * step).collect())
}

fn simulate(a: SimulateArgs, db: &MaterialDb) -> Result<()> {
    let materials: Vec<String> = parse_list(&a.material, "material")?;
    let alphas: Vec<f64> = parse_list(&a.alpha, "alpha")?;
    let angles = parse_angles(&a.angles)?;
    let sub = match (a.model, &a.subsurface) {
        (SimModel::Mixture, Some(s)) => Some(db.get(s)?.clone()),
        (SimModel::Mixture, None) => return Err(Error::Domain("--model mixture needs --subsurface".into())),
        _ => None,
    };
    let q = QuadratureConfig {
        n_zenith: a.nodes,
        n_azimuth: a.nodes,
        ..QuadratureConfig::default()
    };
    let mut csv = String::from("material,psi_i_deg,alpha,dolp\n");
    for name in &materials {
        let m = db.get(name)?;
        for &alpha in &alphas {
            for &deg in &angles {
                // Grazing limit: R_S = R_P = 1, so every model vanishes.
                let dolp = if deg >= 90.0 {
                    0.0
                } else {
                    let psi = deg.to_radians();
                    let scene = RadiometricScene::new(alpha, psi)?;
                    match a.model {
                        SimModel::Simplified => dolp_simplified(m, &scene)?,
                        SimModel::Full => dolp_full(m, 1.0, alpha, psi, &q)?,
                        SimModel::Mixture => {
                            let s = sub.as_ref().expect("checked above");
                            dolp_mixture(dolp_simplified(m, &scene)?, dolp_simplified(s, &scene)?, alpha)
                        }
                    }
                };
                writeln!(csv, "{},{},{},{}", m.name, format_sig9(deg), format_sig9(alpha), format_sig9(dolp))
                    .expect("string write");
            }
        }
    }
    emit(&a.out, &csv)
}

fn synth(a: SynthArgs, seed: Option<u64>, db: &MaterialDb) -> Result<()> {
    let mut file = match &a.spec {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| match e.kind() {
                std::io::ErrorKind::NotFound => Error::MissingFile(p.clone()),
                _ => Error::Domain(format!("{}: {e}", p.display())),
            })?;
            serde_json::from_str::<SynthFile>(&text).map_err(|e| Error::Schema(format!("{}: {e}", p.display())))?
        }
        None => SynthFile::default(),
    };
    if let Some(s) = seed {
        file.config.seed = s;
    }
    if let Some(n) = a.frames {
        file.config.frame_count = n;
    }
    if let Some(d) = a.angle {
        file.config.psi_i_deg = d;
    }
    if let Some(s) = a.sigma {
        file.config.noise_sigma = s;
    }
    if a.print_spec {
        println!("{}", serde_json::to_string_pretty(&file).expect("spec serializes"));
        return Ok(());
    }
    let out_dir = a.out.ok_or_else(|| Error::Domain("synth needs --out".into()))?;
    let rendered = render_mosaic_sequence(&file.specimen, &file.config, db)?;
    for w in &rendered.warnings {
        eprintln!("warning: {w}");
    }
    let p = io::write_synth_bundle(&out_dir, &rendered, &file)?;
    println!("{}", p.display());
    Ok(())
}

fn process(a: ProcessArgs) -> Result<()> {
    let stack = io::read_mosaic_stack(&a.input)?;
    let config = PipelineConfig {
        interpolation: match a.interpolation {
            InterpArg::Bilinear => Interpolation::Bilinear,
            InterpArg::Bicubic => Interpolation::Bicubic,
        },
        guided: (!a.no_guided).then_some(GuidedParams {
            radius: a.radius,
            eps: a.eps,
        }),
    };
    let products = process_stack(&stack, &config)?;
    let rate = stack.frame_rate_hz();
    let created = Creation::new(None);
    if let Some(p) = &a.intensity_out {
        let inten = ImageStack::new(products.iter().map(|p| p.intensity.clone()).collect(), rate, StackOrigin::Intensity)?;
        io::write_image_stack(p, &inten, created.clone())?;
    }
    let dolp = ImageStack::new(products.into_iter().map(|p| p.dolp.into_image()).collect(), rate, StackOrigin::Dolp)?;
    let p = io::write_image_stack(&a.out, &dolp, created)?;
    println!("{}", p.display());
    Ok(())
}

fn parse_window(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::Domain(format!("window `{s}` must be start:end"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn detect(a: DetectArgs) -> Result<()> {
    let mut stack = io::read_image_stack(&a.input)?;
    if let Some(w) = &a.window {
        let (s, e) = parse_window(w)?;
        stack = stack.truncate_window(s, e)?;
    }
    let bins = match &a.bins {
        Some(b) => parse_list::<usize>(b, "bin")?,
        None => default_bins(stack.len(), stack.frame_rate_hz()),
    };
    let maps: Vec<DetectionMap> = match a.method {
        DetectMethod::Fft => {
            let mut maps = Vec::new();
            for r in fft_phase_bins(&stack, &bins)? {
                maps.push(DetectionMap::from_phase(&stack, &r, false));
                if a.amplitude {
                    maps.push(DetectionMap::from_phase(&stack, &r, true));
                }
            }
            maps
        }
        DetectMethod::Pca => DetectionMap::from_pca(&stack, &pca_components(&stack, a.pcs)?),
        DetectMethod::Report => detection_report(
            &stack,
            &ReportConfig {
                bins: Some(bins),
                num_pcs: a.pcs,
            },
        )?,
    };
    std::fs::create_dir_all(&a.out).map_err(|e| Error::Domain(format!("{}: {e}", a.out.display())))?;
    for m in &maps {
        let files = io::write_map(m, &a.out, &format!("{}-{}", m.meta.origin.as_str(), m.meta.id()))?;
        let hz = m.meta.frequency_hz.map(format_sig9).unwrap_or_default();
        println!("{},{}", files.fmap.display(), hz);
    }
    Ok(())
}

fn read_samples(path: &Path) -> Result<Vec<(f64, f64)>> {
    let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::MissingFile(path.to_path_buf()),
        _ => Error::Domain(format!("{}: {e}", path.display())),
    })?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        let nums = (f.len() >= 2).then(|| (f[0].parse::<f64>(), f[1].parse::<f64>()));
        match nums {
            Some((Ok(d), Ok(v))) => out.push((d.to_radians(), v)),
            _ if i == 0 => continue,
            _ => {
                return Err(Error::Schema(format!(
                    "{}: line {} is not `psi_i_deg,dolp`",
                    path.display(),
                    i + 1
                )))
            }
        }
    }
    Ok(out)
}

fn fit(a: FitArgs, db: &MaterialDb) -> Result<()> {
    let samples = read_samples(&a.input)?;
    let material = db.get(&a.material)?;
    let model = match (a.model, &a.subsurface) {
        (FitModel::Simplified, _) => CurveModel::Simplified,
        (FitModel::Mixture, Some(s)) => CurveModel::Mixture {
            subsurface: db.get(s)?.clone(),
        },
        (FitModel::Mixture, None) => return Err(Error::Domain("--model mixture needs --subsurface".into())),
    };
    let r = fit_dolp_curve(
        &samples,
        material,
        &model,
        &FitOptions {
            residual_ceiling: a.ceiling,
        },
    )?;
    let mut csv = String::from("key,value\n");
    let mut row = |k: &str, v: String| writeln!(csv, "{k},{v}").expect("string write");
    row("alpha", format_sig9(r.alpha));
    row("residual_norm", format_sig9(r.residual_norm));
    row("surface_weight", format_sig9(r.surface_weight));
    row("subsurface_weight", format_sig9(r.subsurface_weight));
    row("degenerate", r.degenerate.to_string());
    row("mirror_alpha", r.mirror_alpha.map(format_sig9).unwrap_or_default());
    emit(&a.out, &csv)
}

fn collect_maps(inputs: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for p in inputs {
        if p.is_dir() {
            let mut found: Vec<PathBuf> = std::fs::read_dir(p)
                .map_err(|e| Error::Domain(format!("{}: {e}", p.display())))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.extension().is_some_and(|x| x == "fmap"))
                .collect();
            found.sort();
            out.extend(found);
        } else {
            out.push(p.clone());
        }
    }
    if out.is_empty() {
        return Err(Error::MissingFile(inputs[0].clone()));
    }
    Ok(out)
}

fn bundle_angle(truth: &Path) -> Option<f64> {
    let dir = if truth.is_dir() { truth.to_path_buf() } else { truth.parent()?.to_path_buf() };
    [dir.join("spec.json"), dir.join("../spec.json")]
        .iter()
        .find_map(|p| std::fs::read_to_string(p).ok())
        .and_then(|t| serde_json::from_str::<SynthFile>(&t).ok())
        .map(|f| f.config.psi_i_deg)
}

fn metrics(a: MetricsArgs) -> Result<()> {
    let (_, mask): (_, LabelMask) = io::read_truth(&a.truth)?;
    let angle = a.angle.or_else(|| bundle_angle(&a.truth));
    let defects: Vec<u16> = (1..mask.names().len() as u16)
        .filter(|l| mask.labels().contains(l))
        .collect();
    let mut csv = String::from("map_id,method,angle_deg,label_a,label_b,cnr,sharpness\n");
    for path in collect_maps(&a.maps)? {
        let map = io::read_map(&path)?;
        let id = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let method = serde_json::to_value(map.meta.method)
            .ok()
            .and_then(|v| v.as_str().map(str::to_string))
            .unwrap_or_default();
        let sharp = format_sig9(edge_sharpness(&map.image, &mask)?);
        let angle_s = angle.map(format_sig9).unwrap_or_default();
        let name = |l: u16| mask.name(l).unwrap_or("?").to_string();
        let mut pairs: Vec<(u16, u16)> = defects.iter().map(|&l| (l, 0)).collect();
        for (i, &x) in defects.iter().enumerate() {
            for &y in &defects[i + 1..] {
                pairs.push((x, y));
            }
        }
        for (x, y) in pairs {
            let c = cnr_between(&map.image, &mask, x, y)?;
            writeln!(csv, "{id},{method},{angle_s},{},{},{},{sharp}", name(x), name(y), format_sig9(c))
                .expect("string write");
        }
    }
    emit(&a.out, &csv)
}
