#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use log::info;
use saccadic::config::RunConfig;
use saccadic::fmt::sig6;
use saccadic::io;
use saccadic::output::Outputs;
use saccadic::pipeline::{
    format_manifest, format_report, plan_pipeline, render_frames, PipelineSettings, RENDER_SCALE,
};
use saccadic::sequence::{frame_times, plan_trial_sequence, render_trial_sequence_with};
use saccadic::spectral::{butterworth_lowpass_with, radial_power_spectrum, Boundary, Region, DEFAULT_STIMULUS_PPD};
use saccadic::{fig3, fmt};
use saccadic_core::bitrate::{inclusive_steps, sweep};
use saccadic_core::detect::{detect_saccades_offline, run_trial};
use saccadic_core::synth::generate_trace;
use saccadic_core::{
    Distribution, OnlineConfig, RenderSchedule, SimConfig, SpreadEstimator, StepSchedule, SynthConfig,
};

#[derive(Parser)]
#[command(name = "saccadic", version, about = "Saccade-contingent rendering toolkit")]
struct Cli {
    /// key = value configuration file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for outputs; relative output paths are resolved against it
    #[arg(long, global = true, env = "SACCADIC_OUT_DIR")]
    out_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// -v info, -vv debug
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum DetectMode {
    Offline,
    Online,
}

#[derive(Clone, Copy, ValueEnum)]
enum Spread {
    Mad,
    Sd,
}

#[derive(Clone, Copy, ValueEnum)]
enum SeqMode {
    Step,
    Ramp,
}

#[derive(Clone, Copy, ValueEnum)]
enum Landings {
    Periodic,
    Random,
}

#[derive(Subcommand)]
enum Command {
    /// Detect saccades in a gaze trace CSV
    Detect {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "offline")]
        mode: DetectMode,
        #[arg(long)]
        out: PathBuf,
        /// Boxcar length in samples
        #[arg(long)]
        window: Option<usize>,
        #[arg(long)]
        sd_multiplier: Option<f64>,
        #[arg(long)]
        min_duration_ms: Option<f64>,
        #[arg(long, value_enum)]
        spread: Option<Spread>,
        /// Fixation point "x,y" in degrees (online mode)
        #[arg(long, value_parser = parse_pair, default_value = "0,0")]
        fixation: (f64, f64),
        /// Target point "x,y" in degrees (online mode)
        #[arg(long, value_parser = parse_pair)]
        target: Option<(f64, f64)>,
        /// Stimulus onset; earlier departures abort the trial (online mode)
        #[arg(long, default_value_t = 0.0)]
        arm_ms: f64,
        #[arg(long, default_value_t = 1.9)]
        departure_radius: f64,
        #[arg(long, default_value_t = 2.9)]
        landing_radius: f64,
        /// Also write the online state transitions here
        #[arg(long)]
        transitions: Option<PathBuf>,
    },
    /// Generate a synthetic gaze trace with known saccades
    Synth {
        #[arg(long, default_value_t = 10_000.0)]
        duration: f64,
        /// Saccades per second
        #[arg(long, default_value_t = 4.0)]
        rate: f64,
        #[arg(long, default_value_t = 1000.0)]
        sample_rate: f64,
        #[arg(long, default_value_t = 4.0)]
        amp_min: f64,
        #[arg(long, default_value_t = 15.0)]
        amp_max: f64,
        #[arg(long, default_value_t = 0.05)]
        drift_sigma: f64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        truth: Option<PathBuf>,
    },
    /// Bitrate savings grid over ppd and saccade frequency
    Bitrate {
        #[arg(long, default_value_t = 30.0)]
        ppd_min: f64,
        #[arg(long, default_value_t = 100.0)]
        ppd_max: f64,
        #[arg(long, default_value_t = 1.0)]
        freq_min: f64,
        #[arg(long, default_value_t = 8.0)]
        freq_max: f64,
        #[arg(long)]
        revert_ms: Option<f64>,
        #[arg(long)]
        refresh: Option<f64>,
        #[arg(long, value_enum, default_value = "periodic")]
        landings: Landings,
        /// Round reduced frames to whole pixels
        #[arg(long)]
        quantize: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Butterworth lowpass an image
    Filter {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_STIMULUS_PPD)]
        ppd: f64,
        #[arg(long)]
        cutoff_cpd: f64,
        #[arg(long)]
        order: Option<u32>,
        /// Mirror-pad instead of treating the image as periodic
        #[arg(long)]
        mirror: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Radial power spectrum of an image
    Spectrum {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_STIMULUS_PPD)]
        ppd: f64,
        /// Window "cx,cy,side" in degrees from the top-left corner
        #[arg(long)]
        region: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Render a post-saccadic frame sequence
    Sequence {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_STIMULUS_PPD)]
        ppd: f64,
        #[arg(long, value_enum)]
        mode: SeqMode,
        #[arg(long, default_value_t = 200.0)]
        hold_ms: f64,
        #[arg(long, default_value_t = 21.1)]
        cutoff_cpd: f64,
        #[arg(long, default_value_t = 90.0)]
        refresh: f64,
        /// Sequence length after landing
        #[arg(long, default_value_t = 600.0)]
        duration_ms: f64,
        /// Acuity offset for ramp mode (cpd)
        #[arg(long, allow_hyphen_values = true)]
        offset: Option<f64>,
        #[arg(long)]
        order: Option<u32>,
    },
    /// Detect, schedule, render and account bits for a recorded trial
    Pipeline {
        #[arg(long)]
        trace: PathBuf,
        #[arg(long)]
        image: PathBuf,
        /// Display pixels per degree
        #[arg(long)]
        ppd: Option<f64>,
        /// Image pixels per degree; default 1.5 × display
        #[arg(long)]
        image_ppd: Option<f64>,
        #[arg(long)]
        refresh: Option<f64>,
        #[arg(long)]
        latency_ms: Option<f64>,
        #[arg(long)]
        latency_jitter_ms: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        offset: Option<f64>,
        /// Only write the manifest and report
        #[arg(long)]
        no_frames: bool,
    },
    /// Default savings sweep as grid CSV plus per-frequency curves
    ReproduceFig3 {
        #[arg(long)]
        revert_ms: Option<f64>,
    },
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or("expected x,y")?;
    let p = |v: &str| v.trim().parse::<f64>().map_err(|e| e.to_string());
    Ok((p(a)?, p(b)?))
}

struct Ctx {
    cfg: RunConfig,
    out_dir: PathBuf,
}

impl Ctx {
    fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.out_dir.join(p)
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    if let Err(e) = run(cli) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> Result<()> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p).with_context(|| format!("loading config {}", p.display()))?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    let out_dir = cli
        .out_dir
        .or_else(|| cfg.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    let mut ctx = Ctx { cfg, out_dir };
    let mut outputs = Outputs::new();
    dispatch(cli.command, &mut ctx, &mut outputs)?;
    for p in outputs.commit() {
        info!("wrote {}", p.display());
    }
    Ok(())
}

fn dispatch(cmd: Command, ctx: &mut Ctx, outputs: &mut Outputs) -> Result<()> {
    match cmd {
        Command::Detect {
            input,
            mode,
            out,
            window,
            sd_multiplier,
            min_duration_ms,
            spread,
            fixation,
            target,
            arm_ms,
            departure_radius,
            landing_radius,
            transitions,
        } => {
            let trace = io::read_trace(&input).with_context(|| format!("reading {}", input.display()))?;
            let events = match mode {
                DetectMode::Offline => {
                    let mut det = ctx.cfg.detector;
                    if let Some(w) = window {
                        det.window = w;
                    }
                    if let Some(m) = sd_multiplier {
                        det.sd_multiplier = m;
                    }
                    if let Some(d) = min_duration_ms {
                        det.min_duration_ms = d;
                    }
                    if let Some(s) = spread {
                        det.spread = match s {
                            Spread::Mad => SpreadEstimator::Mad,
                            Spread::Sd => SpreadEstimator::StdDev,
                        };
                    }
                    detect_saccades_offline(&trace, &det)
                }
                DetectMode::Online => {
                    let Some(target) = target else {
                        bail!("online mode needs --target x,y");
                    };
                    let config = OnlineConfig {
                        fixation_center: fixation,
                        departure_radius,
                        target_center: target,
                        landing_radius,
                    };
                    let (trans, saccade) = run_trial(&trace, config, arm_ms)?;
                    if let Some(p) = transitions {
                        outputs.write(&ctx.resolve(&p), io::format_transitions(&trans)?)?;
                    }
                    saccade.into_iter().collect()
                }
            };
            info!("{} saccades", events.len());
            outputs.write(&ctx.resolve(&out), io::format_events(&events)?)?;
        }
        Command::Synth {
            duration,
            rate,
            sample_rate,
            amp_min,
            amp_max,
            drift_sigma,
            out,
            truth,
        } => {
            let cfg = SynthConfig {
                duration_ms: duration,
                sample_rate,
                saccade_rate: rate,
                amplitude_range: (amp_min, amp_max),
                drift_sigma,
                seed: ctx.cfg.seed,
                ..SynthConfig::default()
            };
            let synth = generate_trace(&cfg)?;
            outputs.write(&ctx.resolve(&out), io::format_trace(&synth.trace)?)?;
            if let Some(t) = truth {
                outputs.write(&ctx.resolve(&t), io::format_events(&synth.truth)?)?;
            }
        }
        Command::Bitrate {
            ppd_min,
            ppd_max,
            freq_min,
            freq_max,
            revert_ms,
            refresh,
            landings,
            quantize,
            out,
        } => {
            if ppd_max < ppd_min || freq_max < freq_min {
                bail!("range minimum exceeds maximum");
            }
            let mut display = ctx.cfg.display;
            if let Some(r) = refresh {
                display.refresh_hz = r;
            }
            let sim = SimConfig {
                revert_after_ms: revert_ms.unwrap_or(ctx.cfg.revert_after_ms),
                curve: ctx.cfg.curve,
                distribution: match landings {
                    Landings::Periodic => Distribution::Periodic,
                    Landings::Random => Distribution::RandomUniform {
                        seed: ctx.cfg.seed,
                        jitter: 0.1,
                    },
                },
                quantize,
                ..SimConfig::default()
            };
            let grid = sweep(
                &inclusive_steps(ppd_min, ppd_max, 1.0),
                &inclusive_steps(freq_min, freq_max, 1.0),
                &display,
                &sim,
            )?;
            outputs.write(&ctx.resolve(&out), fig3::format_grid_csv(&grid))?;
        }
        Command::Filter {
            input,
            ppd,
            cutoff_cpd,
            order,
            mirror,
            out,
        } => {
            let out = ctx.resolve(&out);
            let (format, rgb) = io::image_format_for(&out)?;
            let img = io::read_image(&input, ppd).with_context(|| format!("reading {}", input.display()))?;
            let boundary = if mirror { Boundary::Mirror } else { Boundary::Periodic };
            let filtered =
                butterworth_lowpass_with(&img, cutoff_cpd, order.unwrap_or(ctx.cfg.butterworth_order), boundary)?;
            outputs.write(&out, io::encode_image(&filtered, format, rgb)?)?;
        }
        Command::Spectrum {
            input,
            ppd,
            region,
            out,
        } => {
            let img = io::read_image(&input, ppd).with_context(|| format!("reading {}", input.display()))?;
            let region = region
                .map(|r| -> Result<Region> {
                    let v: Vec<f64> = r.split(',').map(|s| s.trim().parse()).collect::<Result<_, _>>()?;
                    if v.len() != 3 {
                        bail!("--region takes cx,cy,side");
                    }
                    Ok(Region::square((v[0], v[1]), v[2]))
                })
                .transpose()?;
            let spec = radial_power_spectrum(&img, region)?;
            let mut text = format!("# slope {}\nfreq_cpd,power\n", sig6(spec.slope));
            for (f, p) in spec.freqs_cpd.iter().zip(&spec.power) {
                text.push_str(&format!("{},{}\n", sig6(*f), sig6(*p)));
            }
            println!("slope {}", sig6(spec.slope));
            outputs.write(&ctx.resolve(&out), text)?;
        }
        Command::Sequence {
            input,
            ppd,
            mode,
            hold_ms,
            cutoff_cpd,
            refresh,
            duration_ms,
            offset,
            order,
        } => {
            let img = io::read_image(&input, ppd).with_context(|| format!("reading {}", input.display()))?;
            let schedule = match mode {
                SeqMode::Step => RenderSchedule::Step(StepSchedule::new(cutoff_cpd, hold_ms, img.nyquist_cpd())?),
                SeqMode::Ramp => {
                    let mut params = ctx.cfg.scheduler();
                    params.native_ppd = img.ppd();
                    params.native_acuity = img.nyquist_cpd();
                    if let Some(s) = offset {
                        params.acuity_offset = s;
                    }
                    params.validate()?;
                    RenderSchedule::Ramp {
                        params,
                        curve: ctx.cfg.curve,
                    }
                }
            };
            let count = (duration_ms * refresh / 1000.0).ceil() as usize;
            let times = frame_times(0.0, refresh, count);
            let order = order.unwrap_or(ctx.cfg.butterworth_order);
            let frames = render_trial_sequence_with(&img, &schedule, 0.0, &times, order)?;
            let plan = plan_trial_sequence(&schedule, 0.0, &times)?;
            let mut index = String::from("frame,t_ms,cpd,filtered,file\n");
            for (k, (frame, p)) in frames.iter().zip(&plan).enumerate() {
                let name = format!("frame_{k:05}.png");
                let path = ctx.out_dir.join(&name);
                let (format, rgb) = io::image_format_for(&path)?;
                outputs.write(&path, io::encode_image(frame, format, rgb)?)?;
                index.push_str(&format!(
                    "{k},{},{},{},{name}\n",
                    fmt::ms(p.t_ms),
                    sig6(p.cpd),
                    p.filtered as u8
                ));
            }
            outputs.write(&ctx.out_dir.join("frames.csv"), index)?;
        }
        Command::Pipeline {
            trace,
            image,
            ppd,
            image_ppd,
            refresh,
            latency_ms,
            latency_jitter_ms,
            offset,
            no_frames,
        } => {
            let cfg = &mut ctx.cfg;
            if let Some(p) = ppd {
                cfg.display.ppd = p;
            }
            if let Some(r) = refresh {
                cfg.display.refresh_hz = r;
            }
            if let Some(l) = latency_ms {
                cfg.latency_ms = l;
            }
            if let Some(j) = latency_jitter_ms {
                cfg.latency_jitter_ms = j;
            }
            if let Some(s) = offset {
                cfg.acuity_offset = s;
            }
            cfg.validate()?;
            let settings = PipelineSettings::from_config(cfg);
            let gaze = io::read_trace(&trace).with_context(|| format!("reading {}", trace.display()))?;
            let img_ppd = image_ppd.or(cfg.image_ppd).unwrap_or(RENDER_SCALE * cfg.display.ppd);
            let img = if no_frames {
                None
            } else {
                Some(io::read_image(&image, img_ppd).with_context(|| format!("reading {}", image.display()))?)
            };
            let mut plan = plan_pipeline(&gaze, &settings)?;
            if let Some(img) = &img {
                render_frames(img, &mut plan, &settings, &ctx.out_dir.join("frames"), outputs)?;
            }
            let out_dir = ctx.out_dir.clone();
            outputs.write(&out_dir.join("events.json"), io::format_events(&plan.events)?)?;
            outputs.write(&out_dir.join("manifest.json"), format_manifest(&plan.manifest)?)?;
            outputs.write(&out_dir.join("report.json"), format_report(&plan.report)?)?;
            println!(
                "saccades {} frames {} savings {}",
                plan.report.saccades,
                plan.report.frames,
                sig6(plan.report.savings)
            );
        }
        Command::ReproduceFig3 { revert_ms } => {
            let sim = SimConfig {
                revert_after_ms: revert_ms.unwrap_or(ctx.cfg.revert_after_ms),
                curve: ctx.cfg.curve,
                ..SimConfig::default()
            };
            let grid = fig3::default_grid(&ctx.cfg.display, &sim)?;
            outputs.write(&ctx.out_dir.join("fig3_grid.csv"), fig3::format_grid_csv(&grid))?;
            outputs.write(&ctx.out_dir.join("fig3_curves.dat"), fig3::format_curves(&grid))?;
        }
    }
    Ok(())
}
