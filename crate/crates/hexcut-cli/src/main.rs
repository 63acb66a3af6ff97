use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use hexcut::enumeration::{count_tilings, enumerate_tilings, Ensemble, Measure};
use hexcut::geometry::{build_polygon, PolygonData, PolygonSpec};
use hexcut::kernel_q::QKernel;
use hexcut::kernel_red::{Form, RedKernel};
use hexcut::lkernel::{blue_points, verify_thm2, BlueKernel, BluePoint};
use hexcut::num::{frac_str, parse_rational, Q};
use hexcut::render::{render_svg, tiling_from_csv, tiling_to_csv, RenderStyle};
use hexcut::sampler::{default_steps, sample, RNG_NAME};
use hexcut::selfcheck;
use hexcut::tacnode::{default_grid, QuadConfig, TacParams, Tacnode};
use hexcut::Error;

#[derive(Parser)]
#[command(name = "hexcut", version, about = "Lozenge tilings of hexagons with cuts: enumeration, kernels, sampling")]
struct Cli {
    /// Worker threads for parallel evaluation.
    #[arg(long, global = true, env = "HEXCUT_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct SpecArg {
    /// Polygon spec as JSON; `-` reads stdin.
    #[arg(default_value = "-")]
    spec: String,
}

#[derive(Args)]
struct PointsArg {
    /// Points `k:x` separated by commas; all points when omitted.
    #[arg(long)]
    points: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print derived polygon data.
    Validate(SpecArg),
    /// Count tilings, or dump them as CSV.
    Enumerate {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        count_only: bool,
        #[arg(long, default_value_t = 100_000)]
        cap: usize,
    },
    /// Exact correlation of a red-dot set by enumeration.
    Correlate {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        points: String,
        /// Use the q-measure instead of the uniform one.
        #[arg(long)]
        q: Option<String>,
        #[arg(long, default_value_t = 1_000_000)]
        cap: usize,
    },
    /// Red kernel table.
    Kernel {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, default_value = "d2")]
        form: String,
        #[command(flatten)]
        points: PointsArg,
    },
    /// q-kernel table.
    Qkernel {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        q: String,
        /// `matrix` or `integral`.
        #[arg(long, default_value = "matrix")]
        route: String,
        #[command(flatten)]
        points: PointsArg,
    },
    /// Blue-dot kernel table.
    Lkernel {
        #[command(flatten)]
        spec: SpecArg,
        /// Compare det L with enumeration on all 1- and 2-point sets instead.
        #[arg(long)]
        verify_thm2: bool,
        #[arg(long, default_value_t = 1_000_000)]
        cap: usize,
    },
    /// Tacnode kernel values and involution residuals on a grid.
    Tacnode {
        #[arg(long, default_value_t = 1)]
        r: usize,
        #[arg(long, default_value_t = 2)]
        rho: i64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        beta: f64,
        /// `tau:theta` points separated by commas; the 5 x 5 default grid when omitted.
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
        #[arg(long, default_value_t = 0.5)]
        a: f64,
        #[arg(long, default_value_t = 0.25)]
        eps: f64,
        #[arg(long, default_value_t = 8.0)]
        t_max: f64,
        #[arg(long, default_value_t = 1.0 / 64.0)]
        h: f64,
        #[arg(long, default_value_t = 64)]
        circle_points: usize,
    },
    /// Run the Metropolis chain and print the final tiling as CSV.
    Sample {
        #[command(flatten)]
        spec: SpecArg,
        /// Defaults to 20 * (movable dots)^2.
        #[arg(long)]
        steps: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        q: Option<String>,
    },
    /// Render a tiling as SVG.
    Render {
        #[command(flatten)]
        spec: SpecArg,
        /// Tiling CSV from `sample`; a fresh sample when omitted.
        #[arg(long)]
        tiling: Option<String>,
        #[arg(long)]
        steps: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        q: Option<String>,
        #[arg(long, default_value_t = 20.0)]
        scale: f64,
        #[arg(long)]
        red_dots: bool,
        #[arg(long)]
        blue_dots: bool,
        #[arg(long)]
        strip: bool,
        #[arg(short, long)]
        output: Option<String>,
    },
    /// Run the acceptance suite.
    Selftest {
        /// Run only these criteria, e.g. `1,4,9`.
        #[arg(long)]
        only: Option<String>,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TwoCutArgs {
    d: i64,
    n1: i64,
    n2: i64,
    m1: i64,
    m2: i64,
    b: i64,
    c: i64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HexagonArgs {
    a: i64,
    b: i64,
    c: i64,
}

enum Failure {
    Input(Error),
    /// Reader closed the pipe; not an error for a filter.
    Closed,
    Verify(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Spec(_) | Error::Parse(_) | Error::Domain(_) | Error::CapExceeded(_) => Failure::Input(e),
            other => Failure::Other(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        if e.kind() == io::ErrorKind::BrokenPipe {
            return Failure::Closed;
        }
        Failure::Other(e.to_string())
    }
}

type Res<T> = std::result::Result<T, Failure>;

fn read_input(path: &str) -> Res<String> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Input(Error::Parse(format!("{path}: {e}"))))
    }
}

/// Full spec, or the shorthands `{"hexagon": {...}}` and `{"two_cut": {...}}`.
fn parse_spec(text: &str) -> Res<PolygonSpec> {
    let v: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let parse_err = |e: serde_json::Error| Failure::Input(Error::Parse(e.to_string()));
    if let Some(h) = v.get("hexagon") {
        let h: HexagonArgs = serde_json::from_value(h.clone()).map_err(parse_err)?;
        return Ok(PolygonSpec::hexagon(h.a, h.b, h.c));
    }
    if let Some(t) = v.get("two_cut") {
        let t: TwoCutArgs = serde_json::from_value(t.clone()).map_err(parse_err)?;
        return Ok(PolygonSpec::two_cut(t.d, t.n1, t.n2, t.m1, t.m2, t.b, t.c));
    }
    Ok(PolygonSpec::from_json(text)?)
}

fn load(spec: &SpecArg) -> Res<PolygonData> {
    Ok(build_polygon(&parse_spec(&read_input(&spec.spec)?)?)?)
}

fn parse_points(s: &str) -> Res<Vec<(i64, i64)>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let (a, b) = t.split_once(':').ok_or_else(|| Error::Parse(format!("point {t:?} is not `k:x`")))?;
            let k = a.trim().parse().map_err(|_| Error::Parse(format!("bad level in {t:?}")))?;
            let x = b.trim().parse().map_err(|_| Error::Parse(format!("bad position in {t:?}")))?;
            Ok((k, x))
        })
        .collect()
}

fn measure(q: &Option<String>) -> Res<Measure> {
    match q {
        None => Ok(Measure::Uniform),
        Some(s) => {
            let v = parse_rational(s)?;
            if v <= Q::from_integer(0.into()) || v >= Q::from_integer(1.into()) {
                return Err(Error::Domain(format!("q = {v} must lie in (0, 1)")).into());
            }
            Ok(Measure::Q(v))
        }
    }
}

fn list(v: &[i64]) -> String {
    let s: Vec<String> = v.iter().map(i64::to_string).collect();
    format!("[{}]", s.join(","))
}

fn validate(p: &PolygonData, out: &mut impl Write) -> io::Result<()> {
    writeln!(out, "N={}", p.n)?;
    writeln!(out, "d={}", p.d)?;
    writeln!(out, "M={}", p.m)?;
    writeln!(out, "r={}", p.r)?;
    writeln!(out, "g={}", p.g)?;
    if let Some(t) = &p.two_cut {
        writeln!(out, "rho={}", t.rho)?;
        writeln!(out, "sigma={}", t.sigma)?;
        writeln!(out, "two_cut_chain={}", t.chain_holds)?;
    }
    writeln!(out, "x={}", list(&p.x))?;
    writeln!(out, "y={}", list(&p.y))?;
    writeln!(out, "L={}", list(&p.left))?;
    writeln!(out, "C={}", list(&p.center))?;
    writeln!(out, "R={}", list(&p.right))?;
    writeln!(out, "G={}", list(&p.gap))?;
    writeln!(out, "tilings={}", count_tilings(p))
}

/// Pairs `(a, b)` with `a` on levels `0..N-1` and `b` on levels `0..N`, or all pairs of the given points.
fn kernel_pairs(p: &PolygonData, pts: &Option<String>) -> Res<Vec<((i64, i64), (i64, i64))>> {
    let (from, to) = match pts {
        Some(s) => {
            let v = parse_points(s)?;
            (v.clone(), v)
        }
        None => (p.points(0..p.n), p.points(0..p.n + 1)),
    };
    Ok(from.iter().flat_map(|&a| to.iter().map(move |&b| (a, b))).collect())
}

fn kernel_csv<F>(pairs: &[((i64, i64), (i64, i64))], f: F, out: &mut impl Write) -> Res<()>
where
    F: Fn((i64, i64), (i64, i64)) -> hexcut::Result<Q> + Sync,
{
    use rayon::prelude::*;
    let vals: Vec<Q> = pairs.par_iter().map(|&(a, b)| f(a, b)).collect::<hexcut::Result<_>>()?;
    writeln!(out, "m,x,n,y,value_num,value_den")?;
    for (&(a, b), v) in pairs.iter().zip(&vals) {
        writeln!(out, "{},{},{},{},{},{}", a.0, a.1, b.0, b.1, v.numer(), v.denom())?;
    }
    Ok(())
}

fn run(cli: Cli) -> Res<()> {
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    match cli.cmd {
        Cmd::Validate(spec) => {
            let p = load(&spec)?;
            validate(&p, &mut out)?;
        }
        Cmd::Enumerate { spec, count_only, cap } => {
            let p = load(&spec)?;
            if count_only {
                writeln!(out, "{}", count_tilings(&p))?;
            } else {
                let ts = enumerate_tilings(&p, cap)?;
                writeln!(out, "tiling,k,x")?;
                for (i, t) in ts.iter().enumerate() {
                    for line in tiling_to_csv(t).lines().skip(1) {
                        writeln!(out, "{i},{line}")?;
                    }
                }
            }
        }
        Cmd::Correlate { spec, points, q, cap } => {
            let p = load(&spec)?;
            let pts = parse_points(&points)?;
            for &(k, x) in &pts {
                if !p.in_domain(k, x) {
                    return Err(Error::Domain(format!("(k, x) = ({k}, {x}) outside the polygon")).into());
                }
            }
            let m = measure(&q)?;
            let ens = Ensemble::new(&p, &m, cap)?;
            writeln!(out, "points,probability")?;
            let label: Vec<String> = pts.iter().map(|(k, x)| format!("{k}:{x}")).collect();
            writeln!(out, "{},{}", label.join(" "), frac_str(&ens.red_correlation(&pts)))?;
        }
        Cmd::Kernel { spec, form, points } => {
            let p = load(&spec)?;
            let form: Form = form.parse()?;
            let k = RedKernel::new(&p)?;
            let pairs = kernel_pairs(&p, &points.points)?;
            kernel_csv(&pairs, |a, b| k.k(form, a.0, a.1, b.0, b.1), &mut out)?;
        }
        Cmd::Qkernel { spec, q, route, points } => {
            let p = load(&spec)?;
            let Measure::Q(qq) = measure(&Some(q))? else { unreachable!() };
            let k = QKernel::new(&p, &qq)?;
            let pairs = kernel_pairs(&p, &points.points)?;
            match route.as_str() {
                "matrix" => kernel_csv(&pairs, |a, b| k.k(a.0, a.1, b.0, b.1), &mut out)?,
                "integral" => kernel_csv(&pairs, |a, b| k.k_integral(a.0, a.1, b.0, b.1), &mut out)?,
                other => {
                    return Err(Error::Parse(format!("unknown route {other:?} (expected matrix or integral)")).into())
                }
            }
        }
        Cmd::Lkernel { spec, verify_thm2: verify, cap } => {
            let p = load(&spec)?;
            if verify {
                let ens = Ensemble::new(&p, &Measure::Uniform, cap)?;
                let rep = verify_thm2(&p, &ens, 2)?;
                writeln!(out, "checked={}", rep.checked)?;
                writeln!(out, "mismatches={}", rep.mismatches)?;
                writeln!(out, "max_discrepancy={}", rep.max_discrepancy)?;
                out.flush()?;
                if rep.mismatches > 0 {
                    return Err(Failure::Verify(format!("{} blue correlations differ", rep.mismatches)));
                }
            } else {
                let k = BlueKernel::new(&p)?;
                let pts: Vec<BluePoint> = blue_points(&p).into_iter().map(|(k, x)| BluePoint::from_level(k, x)).collect();
                writeln!(out, "eta,xi,eta2,xi2,value")?;
                for &a in &pts {
                    for &b in &pts {
                        writeln!(out, "{},{},{},{},{}", a.eta, a.xi, b.eta, b.xi, frac_str(&k.l_oblique(a, b)?))?;
                    }
                }
            }
        }
        Cmd::Tacnode { r, rho, beta, grid, a, eps, t_max, h, circle_points } => {
            let tp = TacParams { r, rho, beta };
            let t = Tacnode::new(tp, QuadConfig { a, eps, t_max, h, circle_points })?;
            let pts: Vec<(i64, f64)> = match grid {
                None => default_grid(&tp),
                Some(s) => s
                    .split(',')
                    .map(|e| {
                        let (a, b) = e.split_once(':').ok_or_else(|| Error::Parse(format!("grid point {e:?} is not `tau:theta`")))?;
                        let tau = a.trim().parse().map_err(|_| Error::Parse(format!("bad tau in {e:?}")))?;
                        let th = b.trim().parse().map_err(|_| Error::Parse(format!("bad theta in {e:?}")))?;
                        Ok((tau, th))
                    })
                    .collect::<hexcut::Result<_>>()?,
            };
            writeln!(out, "tau1,theta1,tau2,theta2,value,residual")?;
            for &(t1, th1) in &pts {
                for &(t2, th2) in &pts {
                    let v = t.kernel(t1, th1, t2, th2, 1e-8)?;
                    let res = t.involution_residual(t1, th1, t2, th2).total;
                    writeln!(out, "{t1},{th1},{t2},{th2},{v:.12e},{res:.3e}")?;
                }
            }
        }
        Cmd::Sample { spec, steps, seed, q } => {
            let p = load(&spec)?;
            let m = measure(&q)?;
            let t = sample(&p, &m, steps.unwrap_or_else(|| default_steps(&p)), seed);
            write!(out, "{}", tiling_to_csv(&t))?;
        }
        Cmd::Render { spec, tiling, steps, seed, q, scale, red_dots, blue_dots, strip, output } => {
            let p = load(&spec)?;
            let t = match tiling {
                Some(path) => {
                    let t = tiling_from_csv(&p, &read_input(&path)?)?;
                    if !hexcut::enumeration::is_interlacing(&p, &t) {
                        return Err(Error::Parse(format!("{path}: not a tiling of this polygon")).into());
                    }
                    t
                }
                None => sample(&p, &measure(&q)?, steps.unwrap_or_else(|| default_steps(&p)), seed),
            };
            let style = RenderStyle { scale, red_dots, blue_dots, strip, ..RenderStyle::default() };
            let svg = render_svg(&p, &t, &style);
            match output {
                Some(path) => fs::write(path, svg)?,
                None => out.write_all(svg.as_bytes())?,
            }
        }
        Cmd::Selftest { only } => {
            let ids: Vec<u8> = match only {
                None => (1..=10).collect(),
                Some(s) => s
                    .split(',')
                    .map(|v| v.trim().parse().map_err(|_| Error::Parse(format!("bad criterion {v:?}"))))
                    .collect::<hexcut::Result<_>>()?,
            };
            let mut failed = 0;
            for id in ids {
                let c = selfcheck::run(id);
                failed += usize::from(!c.passed);
                writeln!(out, "{c}")?;
                out.flush()?;
            }
            writeln!(out, "rng: {RNG_NAME}")?;
            out.flush()?;
            if failed > 0 {
                return Err(Failure::Verify(format!("{failed} criteria failed")));
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match run(cli) {
        Ok(()) | Err(Failure::Closed) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Verify(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Other(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
