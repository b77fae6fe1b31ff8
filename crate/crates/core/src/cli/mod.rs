//! The `pixelseal` command line.
//!
//! Exit codes are shared by every subcommand: 0 success or clean, 1 I/O or
//! decode failure, 2 usage error, 3 tampering detected.

pub mod bench;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::attacks::{apply_attack, load_campaign, run_campaign, Attack, AttackSpec, Rect};
use crate::embedding::BitPlane;
use crate::error::Error;
use crate::keying::{derive_soi, CameraId};
use crate::metrics::{format_db, quality_report};
use crate::protection::{protect, render_tamper_map, verify};
use crate::raster::{has_png_extension, load_image, store_image, Channel, ImagePlanes};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_TAMPERED: i32 = 3;

pub const CAMERA_ID_ENV: &str = "PIXELSEAL_CAMERA_ID";

#[derive(Debug, Parser)]
#[command(name = "pixelseal", version, about = "Fragile watermarking and tamper localization for RGB images")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Embed the keyed block code into the red plane and write a PNG.
    Protect(ProtectArgs),
    /// Check an image and report tampered 4x4 blocks.
    Verify(VerifyArgs),
    /// Compare two images with MAE, MSE, PSNR, SSIM and UIQI.
    Metrics(MetricsArgs),
    /// Protect a directory of images at several planes and tabulate quality.
    Bench(BenchArgs),
    /// Apply a tampering attack, or run a campaign of them.
    Attack(Box<AttackArgs>),
}

#[derive(Debug, Clone, Args)]
pub struct KeyArgs {
    /// Camera ID as text (falls back to $PIXELSEAL_CAMERA_ID).
    #[arg(long, conflicts_with = "camera_id_hex")]
    pub camera_id: Option<String>,
    /// Camera ID as hex bytes.
    #[arg(long)]
    pub camera_id_hex: Option<String>,
}

impl KeyArgs {
    pub fn resolve(&self) -> Result<CameraId, CliError> {
        let id = match (&self.camera_id, &self.camera_id_hex) {
            (Some(text), _) => CameraId::from_text(text),
            (None, Some(hex)) => CameraId::from_hex(hex),
            (None, None) => match std::env::var(CAMERA_ID_ENV) {
                Ok(text) => CameraId::from_text(&text),
                Err(_) => {
                    return Err(CliError::usage(format!(
                        "one of --camera-id, --camera-id-hex or ${CAMERA_ID_ENV} is required"
                    )))
                }
            },
        };
        id.map_err(CliError::from)
    }
}

fn parse_plane(s: &str) -> Result<BitPlane, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Args)]
pub struct ProtectArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub key: KeyArgs,
    /// Bit plane: 0-7, lsb, fourth or msb.
    #[arg(long, default_value = "lsb", value_parser = parse_plane)]
    pub plane: BitPlane,
    /// Output path; must end in .png.
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub key: KeyArgs,
    #[arg(long, default_value = "lsb", value_parser = parse_plane)]
    pub plane: BitPlane,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Write a PNG with tampered blocks highlighted.
    #[arg(long)]
    pub map: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricsFormat {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    #[arg(long)]
    pub reference: PathBuf,
    #[arg(long)]
    pub test: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    pub format: MetricsFormat,
    /// Plane label for the CSV `plane` column.
    #[arg(long, value_parser = parse_plane)]
    pub plane: Option<BitPlane>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Directory of PNG, BMP or JPEG images.
    #[arg(long)]
    pub dir: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "0,1,2", value_parser = parse_plane)]
    pub planes: Vec<BitPlane>,
    #[command(flatten)]
    pub key: KeyArgs,
    #[arg(long)]
    pub out: PathBuf,
    /// Append the SGVC and MW reference rows.
    #[arg(long)]
    pub baselines: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum AttackKind {
    OnePixel,
    CopyMove,
    Splice,
    Recompress,
}

#[derive(Debug, Args)]
pub struct AttackArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, required_unless_present = "campaign", conflicts_with = "campaign")]
    pub kind: Option<AttackKind>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// one_pixel: column.
    #[arg(long)]
    pub x: Option<usize>,
    /// one_pixel: row.
    #[arg(long)]
    pub y: Option<usize>,
    /// one_pixel: red, green or blue.
    #[arg(long)]
    pub channel: Option<Channel>,
    /// copy_move: source rectangle `x,y,width,height`.
    #[arg(long, value_parser = parse_rect)]
    pub source: Option<Rect>,
    /// copy_move: destination corner `x,y`.
    #[arg(long, value_parser = parse_point)]
    pub dest: Option<(usize, usize)>,
    /// splice: rectangle `x,y,width,height`.
    #[arg(long, value_parser = parse_rect)]
    pub rect: Option<Rect>,
    /// splice: donor image of the same size.
    #[arg(long)]
    pub donor: Option<PathBuf>,
    /// recompress: JPEG quality 1-100.
    #[arg(long, default_value_t = 90)]
    pub quality: u8,
    /// Attacked image (single-attack mode); must end in .png.
    #[arg(long, required_unless_present = "campaign")]
    pub output: Option<PathBuf>,
    /// JSON list of attack specs to apply and verify.
    #[arg(long)]
    pub campaign: Option<PathBuf>,
    #[command(flatten)]
    pub key: KeyArgs,
    #[arg(long, default_value = "lsb", value_parser = parse_plane)]
    pub plane: BitPlane,
    /// Campaign mode: detection summary CSV (default standard output).
    #[arg(long)]
    pub summary: Option<PathBuf>,
    /// Campaign mode: also write each attacked image here.
    #[arg(long)]
    pub output_dir: Option<PathBuf>,
}

fn parse_numbers<const N: usize>(s: &str) -> Result<[usize; N], String> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<Result<_, _>>()?;
    parts
        .try_into()
        .map_err(|v: Vec<usize>| format!("expected {N} comma-separated numbers, got {}", v.len()))
}

fn parse_rect(s: &str) -> Result<Rect, String> {
    let [x, y, w, h] = parse_numbers::<4>(s)?;
    Ok(Rect::new(x, y, w, h))
}

fn parse_point(s: &str) -> Result<(usize, usize), String> {
    let [x, y] = parse_numbers::<2>(s)?;
    Ok((x, y))
}

/// A failure carrying its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io(_)
            | Error::Decode { .. }
            | Error::Encode(_)
            | Error::UnsupportedFormat(_)
            | Error::UnsupportedBitDepth(_) => EXIT_FAILURE,
            _ => EXIT_USAGE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        Error::Io(e).into()
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

pub fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Protect(a) => cmd_protect(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Metrics(a) => cmd_metrics(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Attack(a) => cmd_attack(*a),
    }
}

fn require_png(path: &Path) -> Result<(), CliError> {
    if has_png_extension(path) {
        Ok(())
    } else {
        Err(Error::LossyOutput(path.to_path_buf()).into())
    }
}

fn cmd_protect(args: ProtectArgs) -> Result<i32, CliError> {
    require_png(&args.output)?;
    let id = args.key.resolve()?;
    let image = load_image(&args.input)?;
    let protected = protect(&image, &id, args.plane)?;
    store_image(&protected.planes, &args.output)?;
    let quality = quality_report(&image, &protected.planes)?;
    println!(
        "soi_fingerprint={} plane={} psnr_db={} output={}",
        protected.soi_fingerprint,
        args.plane,
        format_db(quality.psnr_db),
        args.output.display()
    );
    Ok(EXIT_OK)
}

fn cmd_verify(args: VerifyArgs) -> Result<i32, CliError> {
    if let Some(map) = &args.map {
        require_png(map)?;
    }
    let id = args.key.resolve()?;
    let image = load_image(&args.input)?;
    let report = verify(&image, &id, args.plane)?;
    let json = report.to_json_string_pretty();
    match &args.report {
        Some(path) => {
            std::fs::write(path, format!("{json}\n"))?;
            println!(
                "tampered_blocks={} of {} ({:.4}) report={}",
                report.total_tampered(),
                report.mismatches.len(),
                report.tampered_fraction(),
                path.display()
            );
        }
        None => println!("{json}"),
    }
    if let Some(map) = &args.map {
        store_image(&render_tamper_map(&report, &image)?, map)?;
    }
    Ok(if report.is_clean() { EXIT_OK } else { EXIT_TAMPERED })
}

fn cmd_metrics(args: MetricsArgs) -> Result<i32, CliError> {
    let reference = load_image(&args.reference)?;
    let test = load_image(&args.test)?;
    let q = quality_report(&reference, &test)?;
    match args.format {
        MetricsFormat::Json => {
            println!("{}", serde_json::to_string(&q).expect("report serializes"));
        }
        MetricsFormat::Csv => {
            let mut w = csv::Writer::from_writer(io::stdout().lock());
            let csv_err = |e: csv::Error| CliError::from(io::Error::other(e));
            w.write_record(["image", "plane", "mae", "mse", "psnr_db", "ssim", "uiqi"])
                .map_err(csv_err)?;
            w.write_record([
                args.test.display().to_string(),
                args.plane.map(|p| p.to_string()).unwrap_or_default(),
                q.mae.to_string(),
                q.mse.to_string(),
                format_db(q.psnr_db),
                q.ssim.to_string(),
                q.uiqi.to_string(),
            ])
            .map_err(csv_err)?;
            w.flush()?;
        }
    }
    Ok(EXIT_OK)
}

const IMAGE_EXTENSIONS: [&str; 5] = ["png", "bmp", "jpg", "jpeg", "jpe"];

/// Image files directly under `dir`, sorted by file name.
pub fn list_images(dir: &Path) -> io::Result<Vec<PathBuf>> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .filter(|p| {
            p.extension()
                .and_then(|e| e.to_str())
                .is_some_and(|e| IMAGE_EXTENSIONS.contains(&e.to_ascii_lowercase().as_str()))
        })
        .collect();
    paths.sort();
    Ok(paths)
}

fn cmd_bench(args: BenchArgs) -> Result<i32, CliError> {
    let id = args.key.resolve()?;
    let paths = list_images(&args.dir)?;
    if paths.is_empty() {
        return Err(CliError::usage(format!("no images in {}", args.dir.display())));
    }
    let images = paths
        .iter()
        .map(|p| {
            let name = p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            Ok((name, load_image(p)?))
        })
        .collect::<Result<Vec<(String, ImagePlanes)>, Error>>()?;
    let result = bench::run_bench(&images, &args.planes, &id)?;
    bench::write_csv(BufWriter::new(File::create(&args.out)?), &result, args.baselines)?;
    print!("{}", bench::summary_table(&result, args.baselines));
    Ok(EXIT_OK)
}

fn single_attack_spec(args: &AttackArgs, kind: AttackKind) -> Result<AttackSpec, CliError> {
    let missing = |flag: &str| CliError::usage(format!("--kind {kind:?} requires --{flag}"));
    let attack = match kind {
        AttackKind::OnePixel => Attack::OnePixel {
            x: args.x,
            y: args.y,
            channel: args.channel,
        },
        AttackKind::CopyMove => {
            let (dest_x, dest_y) = args.dest.ok_or_else(|| missing("dest"))?;
            Attack::CopyMove {
                source: args.source.ok_or_else(|| missing("source"))?,
                dest_x,
                dest_y,
            }
        }
        AttackKind::Splice => Attack::Splice {
            rect: args.rect.ok_or_else(|| missing("rect"))?,
            donor: args.donor.clone().ok_or_else(|| missing("donor"))?,
        },
        AttackKind::Recompress => Attack::Recompress {
            quality: args.quality,
        },
    };
    Ok(AttackSpec::new(attack, args.seed))
}

fn cmd_attack(args: AttackArgs) -> Result<i32, CliError> {
    if let Some(campaign) = &args.campaign {
        return run_campaign_cmd(&args, campaign);
    }
    let kind = args.kind.ok_or_else(|| CliError::usage("--kind or --campaign is required"))?;
    let output = args.output.clone().ok_or_else(|| CliError::usage("--output is required"))?;
    require_png(&output)?;
    let spec = single_attack_spec(&args, kind)?;
    let image = load_image(&args.input)?;
    let attacked = apply_attack(&image, &spec)?;
    store_image(&attacked, &output)?;
    println!("kind={} seed={} output={}", spec.attack.name(), spec.seed, output.display());
    Ok(EXIT_OK)
}

fn run_campaign_cmd(args: &AttackArgs, campaign: &Path) -> Result<i32, CliError> {
    let specs = load_campaign(campaign)?;
    let id = args.key.resolve()?;
    let image = load_image(&args.input)?;
    let outcomes = run_campaign(&image, &id, args.plane, &specs)?;

    if let Some(dir) = &args.output_dir {
        std::fs::create_dir_all(dir)?;
        for (i, spec) in specs.iter().enumerate() {
            let path = dir.join(format!("{i:05}_{}_{}.png", spec.attack.name(), spec.seed));
            store_image(&apply_attack(&image, spec)?, path)?;
        }
    }

    let sink: Box<dyn Write> = match &args.summary {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    };
    let mut w = csv::Writer::from_writer(sink);
    let csv_err = |e: csv::Error| CliError::from(io::Error::other(e));
    for o in &outcomes {
        w.serialize(o).map_err(csv_err)?;
    }
    w.flush()?;

    let detected = outcomes.iter().filter(|o| o.detected).count();
    eprintln!(
        "detected {detected}/{} attacks (soi {})",
        outcomes.len(),
        derive_soi(&id).fingerprint()
    );
    Ok(EXIT_OK)
}
