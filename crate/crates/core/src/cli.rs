//! Command-line front end. Every subcommand wraps one library operation and
//! prints its verdict, either as text or (with `--json`) as a JSON report.
//!
//! Exit codes: 0 when a verdict was produced (negative verdicts included),
//! 1 for bad input, 2 for internal numerical failures.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::covering::{self, Codim};
use crate::equations;
use crate::error::{Error, Result};
use crate::expanding;
use crate::linalg::{Matrix, Vector};
use crate::matrix_io::{read_matrix_file, write_matrix_file};
use crate::rigid::{self, RigidCompactSpec};
use crate::seqlab::{self, SequenceModel};
use crate::spectra::{self, Ellipsoid};

#[derive(Debug, Parser)]
#[command(name = "widthlab", version, about = "Kolmogorov widths, ellipsoid covers and XAY = B on finite truncations")]
struct Cli {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// s-numbers and Kolmogorov widths of the ellipsoid generated by a matrix.
    Widths { matrix: PathBuf },
    /// s-numbers of the section of A(B) by the complement of span(Y).
    Section { matrix: PathBuf, subspace: PathBuf },
    /// Lacunarity of a width model, and its relation to a second one if given.
    ClassifySeq {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: Option<String>,
        #[arg(long, default_value_t = 16)]
        k_max: usize,
    },
    /// Does T·A1(B) contain A2(B)?
    CoverTest {
        t: PathBuf,
        a1: PathBuf,
        a2: PathBuf,
        #[arg(long, default_value_t = covering::DEFAULT_TOL)]
        tol: f64,
    },
    /// Minimal-norm cover of A2(B) by A1(B); with --subspace/--values, a cover
    /// of A1(B) with prescribed values on span(Y) instead.
    CoverMake {
        a1: PathBuf,
        a2: Option<PathBuf>,
        #[arg(long)]
        subspace: Option<PathBuf>,
        #[arg(long)]
        values: Option<PathBuf>,
        /// Write the covering operator to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Weak closure of the covers of K2 by K1, from their width models.
    ClassifyWg {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, default_value_t = 16)]
        k_max: usize,
    },
    /// As classify-wg for compact covers (strict majorization).
    ClassifyWcg {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, default_value_t = 16)]
        k_max: usize,
    },
    /// Same range test with the constants c, C of cA1(B) ⊆ A2(B) ⊆ CA1(B).
    RangeEquiv { a1: PathBuf, a2: PathBuf },
    /// Weak fullness from the width model and the codimension of the range closure.
    WeaklyFull {
        #[arg(long)]
        model: String,
        /// A count, or `inf`.
        #[arg(long, default_value = "inf")]
        codim: String,
    },
    /// Covering fraction rho(d) over a tower of truncations.
    Dichotomy {
        #[arg(long)]
        model: String,
        #[arg(long)]
        m: usize,
        #[arg(long, value_delimiter = ',', default_values_t = [8usize, 16, 32, 64])]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Emit `dimension,rho,constraint_residual` rows.
        #[arg(long)]
        csv: bool,
    },
    /// Solve XAY = B.
    SolveXay {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        a_model: Option<String>,
        #[arg(long)]
        b_model: Option<String>,
        #[arg(long)]
        out_x: Option<PathBuf>,
        #[arg(long)]
        out_y: Option<PathBuf>,
    },
    /// Factor B = XY through the doubled space; with --x0/--y0/--tests, move
    /// the factors towards X0, Y0 on the test vectors.
    Factor {
        b: PathBuf,
        #[arg(long)]
        x0: Option<PathBuf>,
        #[arg(long)]
        y0: Option<PathBuf>,
        /// Matrix whose columns are the test vectors.
        #[arg(long)]
        tests: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out_x: Option<PathBuf>,
        #[arg(long)]
        out_y: Option<PathBuf>,
    },
    /// Invertible V with V x_i ≈ x_i' and V^-1 y_j ≈ y_j' (vectors are matrix columns).
    MatchInv {
        xs: PathBuf,
        xs_target: PathBuf,
        ys: PathBuf,
        ys_target: PathBuf,
        #[arg(long, default_value_t = 1e-6)]
        eps: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Is |ATx| >= |Ax| for all x?
    Expanding {
        t: PathBuf,
        a: PathBuf,
        #[arg(long, default_value_t = covering::DEFAULT_TOL)]
        tol: f64,
    },
    /// Weak closure of the A-expanding operators from the s-number model of A.
    ClassifyWe {
        #[arg(long)]
        model: String,
        #[arg(long)]
        kernel_trivial: bool,
    },
    /// Exhaustive cover search on the rigid compact given as JSON {n, alphas, betas}.
    Rigid {
        spec: PathBuf,
        #[arg(long, default_value_t = 10.0)]
        norm_bound: f64,
    },
}

/// Parses `argv` (including the program name), runs the command and writes
/// its output. Returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    1
                }
            };
        }
    };
    match execute(&cli) {
        Ok(text) => {
            let _ = write!(out, "{text}");
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// 1 for bad input, 2 for internal numerical failures.
fn exit_code(e: &Error) -> i32 {
    if e.is_input_error() {
        1
    } else {
        2
    }
}

fn model(flag: &str, text: &str) -> Result<SequenceModel> {
    seqlab::parse_model(text).map_err(|e| match e {
        Error::Parse { source_name, line, column, message } if source_name == "<model>" => Error::Parse {
            source_name: format!("--{flag}"),
            line,
            column,
            message,
        },
        other => other,
    })
}

fn matrix(path: &Path) -> Result<Matrix> {
    read_matrix_file(path)
}

fn vectors(path: &Path) -> Result<Vec<Vector>> {
    Ok(matrix(path)?.column_iter().map(|c| c.into_owned()).collect())
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Numerical(format!("JSON encoding failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

fn reals(xs: &[f64]) -> String {
    xs.iter().map(|x| format!("{x:e}")).collect::<Vec<_>>().join(" ")
}

fn write_optional(path: &Option<PathBuf>, m: &Matrix) -> Result<()> {
    match path {
        Some(p) => write_matrix_file(p, m),
        None => Ok(()),
    }
}

#[derive(Serialize)]
struct WidthsReport {
    spectrum: spectra::SingularSpectrum,
    widths: spectra::WidthSequence,
    samples: Option<String>,
}

#[derive(Serialize)]
struct SeqReport {
    model: String,
    lacunarity: seqlab::LacunarityVerdict,
    other: Option<String>,
    majorizes: Option<seqlab::MajorizationVerdict>,
    strictly_majorizes: Option<seqlab::MajorizationVerdict>,
    max_majorizing_shift: Option<seqlab::ShiftClassification>,
    equivalent: Option<bool>,
}

fn classification_text(v: &covering::ClassificationVerdict) -> String {
    let mut s = format!("{}\nexact: {}\n", v.tag, v.exact);
    if let Some(note) = &v.note {
        let _ = writeln!(s, "note: {note}");
    }
    s
}

fn execute(cli: &Cli) -> Result<String> {
    let as_json = cli.json;
    match &cli.command {
        Command::Widths { matrix: path } => {
            let e = Ellipsoid::new(matrix(path)?)?;
            let widths = spectra::kolmogorov_widths(&e);
            let spectrum = e.spectrum().clone();
            let samples = (spectrum.rank > 0).then(|| SequenceModel::Samples(spectrum.positive().to_vec()).to_string());
            let rep = WidthsReport { spectrum, widths, samples };
            if as_json {
                return json(&rep);
            }
            let mut s = String::new();
            let _ = writeln!(s, "s-numbers (s_1..): {}", reals(&rep.spectrum.values));
            let _ = writeln!(s, "rank: {}", rep.spectrum.rank);
            let _ = writeln!(s, "widths (d_0..): {}", reals(&rep.widths.values));
            match &rep.samples {
                Some(m) => {
                    let _ = writeln!(s, "{m}");
                }
                None => s.push_str("zero matrix: no positive widths\n"),
            }
            Ok(s)
        }
        Command::Section { matrix: path, subspace } => {
            let e = Ellipsoid::new(matrix(path)?)?;
            let sec = spectra::section_spectrum(&e, &matrix(subspace)?)?;
            if as_json {
                return json(&sec);
            }
            Ok(format!("section s-numbers: {}\nrank: {}\n", reals(&sec.values), sec.rank))
        }
        Command::ClassifySeq { a, b, k_max } => {
            let am = model("a", a)?;
            let mut rep = SeqReport {
                model: am.to_string(),
                lacunarity: seqlab::is_lacunary(&am)?,
                other: None,
                majorizes: None,
                strictly_majorizes: None,
                max_majorizing_shift: None,
                equivalent: None,
            };
            if let Some(b) = b {
                let bm = model("b", b)?;
                let maj = seqlab::majorizes(&am, &bm)?;
                if maj.holds {
                    rep.max_majorizing_shift = Some(seqlab::max_majorizing_shift(&am, &bm, *k_max)?);
                }
                rep.majorizes = Some(maj);
                rep.strictly_majorizes = Some(seqlab::strictly_majorizes(&am, &bm)?);
                rep.equivalent = Some(seqlab::equivalent(&am, &bm)?);
                rep.other = Some(bm.to_string());
            }
            if as_json {
                return json(&rep);
            }
            let l = &rep.lacunarity;
            let mut s = format!(
                "{}\nlacunary: {}\nwitness ratio: {:e}\nexact: {}\n",
                rep.model, l.lacunary, l.witness_ratio, l.exact
            );
            if let (Some(m), Some(st), Some(eq)) = (&rep.majorizes, &rep.strictly_majorizes, rep.equivalent) {
                let c = m.constant.map_or("none".to_string(), |c| format!("{c:e}"));
                let _ = writeln!(s, "majorizes: {} (C = {c}, exact: {})", m.holds, m.exact);
                let _ = writeln!(s, "strictly majorizes: {}", st.holds);
                let _ = writeln!(s, "equivalent: {eq}");
                if let Some(sh) = &rep.max_majorizing_shift {
                    match sh.k {
                        Some(k) => {
                            let _ = writeln!(s, "max majorizing shift: {k}");
                        }
                        None => {
                            let _ = writeln!(s, "max majorizing shift: every shift up to {}", sh.exhausted_at);
                        }
                    }
                }
            }
            Ok(s)
        }
        Command::CoverTest { t, a1, a2, tol } => {
            let e1 = Ellipsoid::new(matrix(a1)?)?;
            let e2 = Ellipsoid::new(matrix(a2)?)?;
            let c = covering::covers(&matrix(t)?, &e1, &e2, *tol)?;
            if as_json {
                return json(&c);
            }
            Ok(format!("covers: {}\npsd margin: {:e}\n", c.holds, c.psd_margin))
        }
        Command::CoverMake { a1, a2, subspace, values, out } => {
            let e1 = Ellipsoid::new(matrix(a1)?)?;
            match (a2, subspace, values) {
                (Some(a2), None, None) => {
                    let e2 = Ellipsoid::new(matrix(a2)?)?;
                    let sc = covering::schmidt_cover(&e1, &e2)?;
                    write_optional(out, &sc.operator)?;
                    if as_json {
                        return json(&sc);
                    }
                    Ok(format!("constant C = norm: {:e}\n", sc.constant))
                }
                (None, Some(y), Some(n)) => {
                    let pc = covering::prescribed_cover(&e1, &matrix(y)?, &matrix(n)?)?;
                    write_optional(out, &pc.operator)?;
                    if as_json {
                        return json(&pc);
                    }
                    Ok(format!("rho: {:e}\nconstraint residual: {:e}\n", pc.rho, pc.constraint_residual))
                }
                _ => Err(Error::invalid("give either A2, or both --subspace and --values")),
            }
        }
        Command::ClassifyWg { a, b, k_max } | Command::ClassifyWcg { a, b, k_max } => {
            let (am, bm) = (model("a", a)?, model("b", b)?);
            let v = if matches!(cli.command, Command::ClassifyWg { .. }) {
                covering::classify_wg(&am, &bm, *k_max)?
            } else {
                covering::classify_wcg(&am, &bm, *k_max)?
            };
            if as_json {
                return json(&v);
            }
            Ok(classification_text(&v))
        }
        Command::RangeEquiv { a1, a2 } => {
            let r = covering::range_equiv(&matrix(a1)?, &matrix(a2)?)?;
            if as_json {
                return json(&r);
            }
            let mut s = format!("same range: {}\n", r.same_range);
            if let (Some(c), Some(big)) = (r.c, r.big_c) {
                let _ = writeln!(s, "c: {c:e}\nC: {big:e}");
            }
            Ok(s)
        }
        Command::WeaklyFull { model: m, codim } => {
            let v = covering::is_weakly_full(&model("model", m)?, codim.parse::<Codim>()?)?;
            if as_json {
                return json(&v);
            }
            Ok(format!("weakly full: {}\ncase: {}\n", v.weakly_full, v.case))
        }
        Command::Dichotomy { model: m, m: dim, dims, seed, csv } => {
            let rep = covering::wot_density_experiment(&model("model", m)?, *dim, dims, *seed)?;
            if as_json {
                return json(&rep);
            }
            if *csv {
                return Ok(rep.to_csv());
            }
            let mut s = format!("model: {} (lacunary: {})\n", rep.model, rep.model_lacunary);
            for ((d, r), e) in rep.dims.iter().zip(&rep.rho).zip(&rep.constraint_residuals) {
                let _ = writeln!(s, "d = {d:>4}  rho = {r:.6e}  residual = {e:.1e}");
            }
            for d in &rep.refused {
                let _ = writeln!(s, "d = {d:>4}  refused: model underflows");
            }
            Ok(s)
        }
        Command::SolveXay { a, b, a_model, b_model, out_x, out_y } => {
            let (am, bm) = (matrix(a)?, matrix(b)?);
            let ma = a_model.as_deref().map(|t| model("a-model", t)).transpose()?;
            let mb = b_model.as_deref().map(|t| model("b-model", t)).transpose()?;
            let verdict = equations::xay_solvable(&am, &bm, ma.as_ref(), mb.as_ref())?;
            let solution = if verdict.solvable { Some(equations::solve_xay(&am, &bm)?) } else { None };
            if let Some(sol) = &solution {
                write_optional(out_x, &sol.x)?;
                write_optional(out_y, &sol.y)?;
            }
            if as_json {
                #[derive(Serialize)]
                struct R<'a> {
                    verdict: &'a equations::SolvabilityVerdict,
                    solution: Option<&'a equations::SolutionPair>,
                }
                return json(&R { verdict: &verdict, solution: solution.as_ref() });
            }
            let mut s = format!("solvable: {}\nrank A: {}\nrank B: {}\n", verdict.solvable, verdict.rank_a, verdict.rank_b);
            if let Some(m) = &verdict.asymptotic {
                let _ = writeln!(s, "widths majorized: {} (exact: {})", m.holds, m.exact);
            }
            if let Some(sol) = &solution {
                let _ = writeln!(s, "residual: {:e}", sol.residual);
            }
            Ok(s)
        }
        Command::Factor { b, x0, y0, tests, eps, seed, out_x, out_y } => {
            let bm = matrix(b)?;
            match (x0, y0, tests) {
                (None, None, None) => {
                    let f = equations::factor_pair(&bm)?;
                    write_optional(out_x, &f.x)?;
                    write_optional(out_y, &f.y)?;
                    if as_json {
                        return json(&f);
                    }
                    Ok(format!("X: {}x{}\nY: {}x{}\nresidual: {:e}\n", f.x.nrows(), f.x.ncols(), f.y.nrows(), f.y.ncols(), f.residual))
                }
                (Some(x0), Some(y0), Some(tests)) => {
                    let f = equations::approx_factorization(&bm, &matrix(x0)?, &matrix(y0)?, &vectors(tests)?, *eps, *seed)?;
                    write_optional(out_x, &f.pair.x)?;
                    write_optional(out_y, &f.pair.y)?;
                    if as_json {
                        return json(&f);
                    }
                    Ok(format!(
                        "residual: {:e}\nX residuals: {}\nY residuals: {}\n",
                        f.pair.residual,
                        reals(&f.x_residuals),
                        reals(&f.y_residuals)
                    ))
                }
                _ => Err(Error::invalid("--x0, --y0 and --tests must be given together")),
            }
        }
        Command::MatchInv { xs, xs_target, ys, ys_target, eps, seed, out } => {
            let m = equations::match_invertible(
                &vectors(xs)?,
                &vectors(xs_target)?,
                &vectors(ys)?,
                &vectors(ys_target)?,
                *eps,
                *seed,
            )?;
            write_optional(out, &m.v)?;
            if as_json {
                return json(&m);
            }
            Ok(format!(
                "condition: {:e}\nsigma min: {:e}\nx residuals: {}\ny residuals: {}\n",
                m.condition,
                m.sigma_min,
                reals(&m.x_residuals),
                reals(&m.y_residuals)
            ))
        }
        Command::Expanding { t, a, tol } => {
            let v = expanding::is_expanding(&matrix(t)?, &matrix(a)?, *tol)?;
            if as_json {
                return json(&v);
            }
            Ok(format!("expanding: {}\nmargin: {:e}\n", v.expanding, v.margin))
        }
        Command::ClassifyWe { model: m, kernel_trivial } => {
            let v = expanding::classify_we(&model("model", m)?, *kernel_trivial)?;
            if as_json {
                return json(&v);
            }
            Ok(classification_text(&v))
        }
        Command::Rigid { spec, norm_bound } => {
            let name = spec.display().to_string();
            let text = std::fs::read_to_string(spec).map_err(|e| Error::Parse {
                source_name: name.clone(),
                line: 0,
                column: 0,
                message: format!("cannot read file: {e}"),
            })?;
            let parsed: RigidCompactSpec = serde_json::from_str(&text).map_err(|e| Error::Parse {
                source_name: name,
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            })?;
            let r = rigid::rigid_cover_search(&parsed, *norm_bound)?;
            if as_json {
                return json(&r);
            }
            let st = &r.edge_graph_stats;
            Ok(format!(
                "identity only: {}\nadmissible maps: {}\nconsistent maps: {}\nnorm bound: {}\nthreshold: {:e}\nout-degree min: {}\nin-degree max: {}\nobservation holds: {}\n",
                r.identity_only,
                r.admissible_maps,
                r.consistent_maps,
                r.max_norm_bound,
                r.threshold,
                st.out_degree_min.map_or("none".into(), |o| o.to_string()),
                st.in_degree_max,
                st.observation_holds
            ))
        }
    }
}
