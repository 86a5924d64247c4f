//! `fakeflow` command line.
//!
//! Exit codes: 0 success, 1 hard error (bad usage, configuration, I/O,
//! pipeline abort), 2 finished with some failed samples.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use fakeflow::augment::{derive_sample_seed, sample_augmentation, SampleSeed};
use fakeflow::flowio::{read_depth, read_flo, write_png_gray, write_png_rgb};
use fakeflow::flowviz::{build_color_wheel, render_depth, render_stage};
use fakeflow::motion::{conversion_stages, MotionField};
use fakeflow::pipeline::{
    run_dataset, simulate_flow, simulate_video_flows, DatasetConfig, DatasetManifest, MANIFEST_FILE,
};
use fakeflow::{normalize_depth, render_flow, AugmentationParams, Error};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_PARTIAL: i32 = 2;

/// File names written by `inspect --stages`, in pipeline order.
pub const STAGE_FILES: [&str; 5] = [
    "01_depth.png",
    "02_reversed.png",
    "03_shifted.png",
    "04_scaled.png",
    "05_flow.png",
];

#[derive(Debug, Parser)]
#[command(
    name = "fakeflow",
    version,
    about = "Simulate optical flow maps from monocular depth maps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build an image/flow dataset from paired image and depth folders.
    Gen(GenArgs),
    /// Simulate one flow per extracted video frame.
    Video(VideoArgs),
    /// Colorize a .flo motion field.
    Viz(VizArgs),
    /// Print per-stage statistics for one depth map, optionally writing stage images.
    Inspect(InspectArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Folder of 16-bit grayscale PNG or PFM depth maps, matched to inputs by file stem.
    #[arg(long, value_name = "DIR")]
    depths: PathBuf,
    /// Output folder (flow_png/, flo/ and manifest.json are written here).
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
    /// Global seed; every sample's draws derive from it and the sample id.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads.
    #[arg(long, value_name = "N", default_value_t = default_jobs(), value_parser = clap::value_parser!(u64).range(1..))]
    jobs: u64,
    /// Also write the raw motion field as Middlebury .flo.
    #[arg(long)]
    flo: bool,
    /// Skip the colorized PNG (requires --flo).
    #[arg(long, requires = "flo")]
    no_png: bool,
    /// Independent augmentation draws per input.
    #[arg(long, value_name = "K", default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    variants: u64,
    /// Use the x-axis reversal flag for both axes.
    #[arg(long)]
    shared_reverse: bool,
    /// Print the summary as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct GenArgs {
    /// Folder of source images.
    #[arg(long, value_name = "DIR")]
    images: PathBuf,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Debug, Args)]
struct VideoArgs {
    /// Folder of extracted frames, flat or one subfolder per sequence.
    #[arg(long, value_name = "DIR")]
    frames: PathBuf,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Debug, Args)]
struct VizArgs {
    /// Input .flo file.
    #[arg(long, value_name = "FILE")]
    flo: PathBuf,
    /// Output PNG.
    #[arg(long, value_name = "PNG")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct InspectArgs {
    /// Depth map (16-bit grayscale PNG or PFM).
    #[arg(long, value_name = "FILE")]
    depth: PathBuf,
    /// Global seed, combined with the file stem exactly as `gen` does.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Use the x-axis reversal flag for both axes.
    #[arg(long)]
    shared_reverse: bool,
    /// Write one image per conversion stage into --out.
    #[arg(long, requires = "out")]
    stages: bool,
    /// Folder for stage images.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
}

fn default_jobs() -> u64 {
    std::thread::available_parallelism().map_or(1, |n| n.get() as u64)
}

fn init_logging() {
    let env = env_logger::Env::default().default_filter_or("warn");
    let _ = env_logger::Builder::from_env(env)
        .format_timestamp(None)
        .try_init();
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    init_logging();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(&a),
        Command::Video(a) => cmd_video(&a),
        Command::Viz(a) => cmd_viz(&a),
        Command::Inspect(a) => cmd_inspect(&a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

fn dataset_config(inputs: &Path, run: &RunArgs) -> DatasetConfig {
    DatasetConfig {
        images_dir: inputs.to_path_buf(),
        depths_dir: run.depths.clone(),
        output_dir: run.out.clone(),
        global_seed: run.seed,
        emit_flo: run.flo,
        emit_png: !run.no_png,
        shared_reverse: run.shared_reverse,
        jobs: run.jobs as usize,
        variants: run.variants as usize,
    }
}

fn cmd_gen(a: &GenArgs) -> Result<i32, Error> {
    let config = dataset_config(&a.images, &a.run);
    let start = Instant::now();
    let manifest = run_dataset(&config)?;
    Ok(report(&manifest, &config, start, a.run.json))
}

fn cmd_video(a: &VideoArgs) -> Result<i32, Error> {
    let config = dataset_config(&a.frames, &a.run);
    let start = Instant::now();
    let manifest = simulate_video_flows(&config)?;
    Ok(report(&manifest, &config, start, a.run.json))
}

fn report(m: &DatasetManifest, config: &DatasetConfig, start: Instant, json: bool) -> i32 {
    let wall = start.elapsed().as_secs_f64();
    let manifest_path = config.output_dir.join(MANIFEST_FILE);
    let failures: Vec<_> = m
        .records
        .iter()
        .filter_map(|r| r.error.as_ref().map(|e| (r, e)))
        .collect();
    for (r, e) in &failures {
        eprintln!("failed: {} ({}): {}", r.sample_id, e.class, e.message);
    }
    if json {
        let summary = serde_json::json!({
            "matched": m.records.len(),
            "succeeded": m.succeeded(),
            "failed": m.failed(),
            "degenerate": m.degenerate(),
            "wall_time_s": wall,
            "manifest": manifest_path,
            "failures": failures.iter().map(|(r, e)| serde_json::json!({
                "sample_id": r.sample_id,
                "class": e.class,
                "message": e.message,
            })).collect::<Vec<_>>(),
        });
        println!("{summary}");
    } else {
        println!("matched: {}", m.records.len());
        println!("succeeded: {}", m.succeeded());
        println!("failed: {}", m.failed());
        println!("degenerate: {}", m.degenerate());
        println!("wall_time_s: {wall:.3}");
        println!("manifest: {}", manifest_path.display());
    }
    if m.failed() > 0 {
        EXIT_PARTIAL
    } else {
        EXIT_OK
    }
}

fn cmd_viz(a: &VizArgs) -> Result<i32, Error> {
    let field = read_flo(&a.flo)?;
    let img = render_flow(&field)?;
    write_png_rgb(&img, &a.out)?;
    Ok(EXIT_OK)
}

fn stage_json(name: &str, m: &MotionField) -> serde_json::Value {
    let (u, v) = (m.u_stats(), m.v_stats());
    serde_json::json!({
        "stage": name,
        "u": { "min": u.min, "max": u.max, "mean": u.mean },
        "v": { "min": v.min, "max": v.max, "mean": v.mean },
        "max_norm": m.max_norm(),
    })
}

fn params_json(p: &AugmentationParams) -> serde_json::Value {
    serde_json::to_value(p).expect("params serialize")
}

fn cmd_inspect(a: &InspectArgs) -> Result<i32, Error> {
    let raw = read_depth(&a.depth)?;
    let (lo, hi) = raw.range().unwrap_or((f64::NAN, f64::NAN));
    let depth = normalize_depth(&raw)?;
    let sample_id = a
        .depth
        .file_stem()
        .and_then(|s| s.to_str())
        .ok_or_else(|| {
            Error::InvalidArgument(format!("{} has no usable file stem", a.depth.display()))
        })?;
    let seed = derive_sample_seed(&SampleSeed::new(a.seed, sample_id))?;
    let mut params = sample_augmentation(seed);
    if a.shared_reverse {
        params = params.with_shared_reverse();
    }
    let stages = conversion_stages(&depth, &params)?;
    let wheel = build_color_wheel();
    let flow = simulate_flow(&depth, &params, &wheel)?;

    let named = [
        ("reversed", &stages.reversed),
        ("shifted", &stages.shifted),
        ("scaled", &stages.scaled),
    ];
    if a.json {
        let report = serde_json::json!({
            "depth": a.depth,
            "width": raw.width(),
            "height": raw.height(),
            "raw_min": lo,
            "raw_max": hi,
            "sample_id": sample_id,
            "seed": seed,
            "params": params_json(&params),
            "stages": named.iter().map(|(n, m)| stage_json(n, m)).collect::<Vec<_>>(),
            "degenerate": flow.degenerate,
        });
        println!("{report}");
    } else {
        println!("depth: {}", a.depth.display());
        println!("size: {}x{}", raw.width(), raw.height());
        println!("raw depth: min={lo} max={hi}");
        println!("sample id: {sample_id}");
        println!("seed: {seed}");
        for (axis, p) in [("x", params.x), ("y", params.y)] {
            println!(
                "params {axis}: delta={} epsilon={} eta={}",
                p.delta, p.epsilon, p.eta
            );
        }
        for (name, m) in named {
            let (u, v) = (m.u_stats(), m.v_stats());
            println!(
                "stage {name}: u min={} max={} mean={:.6} | v min={} max={} mean={:.6} | max_norm={:.6}",
                u.min,
                u.max,
                u.mean,
                v.min,
                v.max,
                v.mean,
                m.max_norm()
            );
        }
        println!("degenerate: {}", flow.degenerate);
    }

    if a.stages {
        let dir = a.out.as_deref().expect("clap enforces --out with --stages");
        std::fs::create_dir_all(dir).map_err(|e| Error::Io {
            path: dir.to_path_buf(),
            source: e,
        })?;
        write_png_gray(&render_depth(&depth), &dir.join(STAGE_FILES[0]))?;
        write_png_rgb(
            &render_stage(&stages.reversed, &wheel)?,
            &dir.join(STAGE_FILES[1]),
        )?;
        write_png_rgb(
            &render_stage(&stages.shifted, &wheel)?,
            &dir.join(STAGE_FILES[2]),
        )?;
        write_png_rgb(
            &render_stage(&stages.scaled, &wheel)?,
            &dir.join(STAGE_FILES[3]),
        )?;
        write_png_rgb(&flow.image, &dir.join(STAGE_FILES[4]))?;
        if !a.json {
            println!(
                "wrote {} stage images to {}",
                STAGE_FILES.len(),
                dir.display()
            );
        }
    }
    Ok(EXIT_OK)
}
