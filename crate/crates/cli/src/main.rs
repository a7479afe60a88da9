//! `lorentzseq` - norms, rearrangements, duality objects, unit-ball
//! classifiers and best-approximation for sequence Lorentz and Marcinkiewicz
//! spaces. One JSON document per invocation on standard output.
//!
//! Exit codes: 0 success, 2 usage or input errors, 3 regime-precondition
//! violations, 4 verification failures.

use clap::{Parser, Subcommand};
use lorentz_seq::certified::q_from_f64;
use lorentz_seq::geometry::{self, CounterexampleKind};
use lorentz_seq::jsonio;
use lorentz_seq::norms;
use lorentz_seq::seqcore::{rearrangement, Sequence};
use lorentz_seq::verify::{self, VerifyParams};
use lorentz_seq::weights::{self, Space, WeightSpec};
use lorentz_seq::{Error, Extended};
use serde_json::{json, Value};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "lorentzseq", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a norm: gamma_{p,w}, d_{1,u} or the dual Marcinkiewicz norm.
    Norm {
        #[arg(long, value_parser = ["gamma", "d1", "mpsi"])]
        space: String,
        #[arg(long)]
        weights: String,
        #[arg(long)]
        seq: String,
        /// Override the exponent p of the weight spec.
        #[arg(long)]
        p: Option<f64>,
    },
    /// Canonical decreasing rearrangement of a sequence.
    Rearrange {
        #[arg(long)]
        seq: String,
    },
    /// Fundamental scalars phi(n), psi(n), v(n), W(n), W_p(n).
    Phi {
        #[arg(long)]
        weights: String,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        p: Option<f64>,
    },
    /// Regime flags of the space generated by a weight spec.
    Regime {
        #[arg(long)]
        weights: String,
        #[arg(long)]
        p: Option<f64>,
    },
    /// Unit-ball point classifiers.
    Classify {
        #[arg(long, value_parser = ["extreme", "extreme-dual", "smooth", "smooth-predual", "smooth-dual"])]
        kind: String,
        #[arg(long)]
        weights: String,
        #[arg(long)]
        seq: String,
    },
    /// Norming functional of x (mode functional) or norming element for y
    /// (mode element, optionally with the approximant index m).
    Norming {
        #[arg(long, value_parser = ["functional", "element"], default_value = "functional")]
        mode: String,
        #[arg(long)]
        weights: String,
        #[arg(long)]
        seq: String,
        #[arg(long)]
        m: Option<u64>,
    },
    /// Counterexample fixture bundles for the failed regimes.
    Counterexample {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        weights: String,
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Best approximation from the span of a basis.
    Project {
        #[arg(long)]
        weights: String,
        #[arg(long)]
        x: String,
        #[arg(long)]
        basis: String,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Operator norm of a matrix via extreme-point enumeration.
    Opnorm {
        #[arg(long)]
        weights: String,
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        n: u64,
    },
    /// Run a verification suite (or all of them).
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        truncation: Option<u64>,
    },
    /// Catalog of the named weight and sequence fixtures.
    Fixtures,
}

fn read_value(input: &str) -> Result<Value, Error> {
    let text = if input.trim_start().starts_with(['{', '[']) {
        input.to_string()
    } else {
        std::fs::read_to_string(input)
            .map_err(|e| Error::InvalidArgument(format!("cannot read {input}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Error::Json(format!("invalid JSON: {e}")))
}

fn read_weights(input: &str, p: Option<f64>) -> Result<WeightSpec, Error> {
    let w = jsonio::weight_from_value(&read_value(input)?)?;
    match p {
        None => Ok(w),
        Some(pf) => {
            let pq = q_from_f64(pf)
                .ok_or_else(|| Error::InvalidArgument("p must be finite".into()))?;
            w.with_p(pq)
        }
    }
}

fn read_seq(input: &str) -> Result<Sequence, Error> {
    jsonio::sequence_from_value(&read_value(input)?)
}

fn extended_with_attained(v: &Extended, attained: Option<u64>) -> Value {
    let mut out = jsonio::extended_to_value(v);
    out.as_object_mut()
        .expect("object")
        .insert("attained_at".into(), json!(attained));
    out
}

fn run(cli: Cli) -> Result<(Value, ExitCode), Error> {
    match cli.command {
        Command::Norm {
            space,
            weights,
            seq,
            p,
        } => {
            let w = read_weights(&weights, p)?;
            let x = read_seq(&seq)?;
            let s = Space::new(w);
            let out = match space.as_str() {
                "gamma" => extended_with_attained(&norms::norm_gamma(&s, &x)?, None),
                "d1" => extended_with_attained(&norms::norm_d1(&s, &x)?, None),
                "mpsi" => {
                    let n = norms::norm_m_psi(&s, &x)?;
                    let mut v = jsonio::supnorm_to_value(&n);
                    v.as_object_mut()
                        .expect("object")
                        .insert("infinite".into(), json!(false));
                    v
                }
                _ => unreachable!("clap validates"),
            };
            Ok((out, ExitCode::SUCCESS))
        }
        Command::Rearrange { seq } => {
            let x = read_seq(&seq)?;
            Ok((
                jsonio::sequence_to_value(&rearrangement(&x)),
                ExitCode::SUCCESS,
            ))
        }
        Command::Phi { weights, n, p } => {
            let w = read_weights(&weights, p)?;
            if n == 0 {
                return Err(Error::InvalidArgument("n must be >= 1".into()));
            }
            let s = Space::new(w);
            let mut out = serde_json::Map::new();
            out.insert("n".into(), json!(n));
            out.insert("phi".into(), jsonio::certval_to_value(&s.phi(n)));
            out.insert("W".into(), jsonio::certval_to_value(&s.w_sum(n)));
            out.insert("Wp".into(), jsonio::certval_to_value(&s.wp(n)));
            if s.is_p1() {
                out.insert("psi".into(), jsonio::certval_to_value(&s.psi(n)?));
                out.insert("v".into(), jsonio::certval_to_value(&s.v(n)?));
            }
            Ok((Value::Object(out), ExitCode::SUCCESS))
        }
        Command::Regime { weights, p } => {
            let w = read_weights(&weights, p)?;
            Ok((
                jsonio::regime_to_value(&weights::regime(&w)),
                ExitCode::SUCCESS,
            ))
        }
        Command::Classify { kind, weights, seq } => {
            let w = read_weights(&weights, None)?;
            let x = read_seq(&seq)?;
            let s = Space::new(w);
            let verdict = match kind.as_str() {
                "extreme" => geometry::classify_extreme_gamma1(&s, &x)?,
                "extreme-dual" => geometry::classify_extreme_dual(&s, &x)?,
                "smooth" => geometry::classify_smooth_gamma1(&s, &x)?,
                "smooth-predual" => geometry::classify_smooth_predual(&s, &x)?,
                "smooth-dual" => geometry::classify_smooth_dual(&s, &x)?,
                _ => unreachable!("clap validates"),
            };
            Ok((jsonio::verdict_to_value(&verdict), ExitCode::SUCCESS))
        }
        Command::Norming {
            mode,
            weights,
            seq,
            m,
        } => {
            let w = read_weights(&weights, None)?;
            let x = read_seq(&seq)?;
            let s = Space::new(w);
            let out = if mode == "functional" {
                let y = geometry::norming_functional(&s, &x)?;
                json!({
                    "y": jsonio::sequence_to_value(&y),
                    "pairing": jsonio::certval_to_value(&norms::pairing(&x, &y)?),
                    "norm_gamma_x": extended_with_attained(&norms::norm_gamma(&s, &x)?, None),
                    "norm_m_psi_y": jsonio::certval_to_value(&norms::norm_m_psi(&s, &y)?.value),
                    "y_in_m_psi0": norms::in_m_psi0(&s, &y)?,
                })
            } else {
                let xe = geometry::norming_element(&s, &x, m)?;
                json!({
                    "x": jsonio::sequence_to_value(&xe),
                    "pairing": jsonio::certval_to_value(&norms::pairing(&xe, &x)?),
                    "norm_gamma_x": extended_with_attained(&norms::norm_gamma(&s, &xe)?, None),
                    "norm_m_psi_y": jsonio::certval_to_value(&norms::norm_m_psi(&s, &x)?.value),
                })
            };
            Ok((out, ExitCode::SUCCESS))
        }
        Command::Counterexample { kind, weights, eps } => {
            let w = read_weights(&weights, None)?;
            let kind = CounterexampleKind::parse(&kind).ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "unknown kind {kind:?}; expected one of oc_failure, sm_failure, sc_p1, sc_winf, sc_zero_weight_n0_1, sc_zero_weight_n0_gt1"
                ))
            })?;
            let s = Space::new(w);
            let eps_q = match eps {
                None => None,
                Some(e) => Some(
                    q_from_f64(e)
                        .ok_or_else(|| Error::InvalidArgument("eps must be finite".into()))?,
                ),
            };
            let bundle = geometry::counterexample(kind, &s, eps_q.as_ref())?;
            Ok((jsonio::bundle_to_value(&bundle), ExitCode::SUCCESS))
        }
        Command::Project {
            weights,
            x,
            basis,
            tol,
        } => {
            let w = read_weights(&weights, None)?;
            let xv = jsonio::f64_vec_from_value(&read_value(&x)?)?;
            let bv = jsonio::f64_matrix_from_value(&read_value(&basis)?)?;
            let s = Space::new(w);
            let res = lorentz_seq::approx::metric_projection(&s, &xv, &bv, tol)?;
            Ok((
                json!({
                    "coefficients": res.coefficients,
                    "distance": jsonio::certval_to_value(&res.distance),
                    "iterations": res.iterations,
                    "oracle_gap": res.oracle_gap,
                }),
                ExitCode::SUCCESS,
            ))
        }
        Command::Opnorm { weights, matrix, n } => {
            let w = read_weights(&weights, None)?;
            let m = jsonio::q_matrix_from_value(&read_value(&matrix)?)?;
            let s = Space::new(w);
            let res = lorentz_seq::approx::operator_norm_via_extremes(&s, n, &m)?;
            Ok((
                json!({
                    "value": jsonio::certval_to_value(&res.value),
                    "exact_certificate": res.exact_certificate,
                }),
                ExitCode::SUCCESS,
            ))
        }
        Command::Verify {
            suite,
            seed,
            trials,
            truncation,
        } => {
            let params = VerifyParams {
                seed,
                trials,
                truncation,
            };
            let reports = if suite == "all" {
                verify::run_all(&params)?
            } else {
                verify::run_suite(&suite, &params)?
            };
            let pass = reports.iter().all(|r| r.pass);
            let out = json!({
                "pass": pass,
                "suites": reports
                    .iter()
                    .map(|r| json!({
                        "label": r.label,
                        "pass": r.pass,
                        "trials": r.trials,
                        "failures": r.failures,
                        "max_residual": r.max_residual,
                        "details": r.details,
                    }))
                    .collect::<Vec<_>>(),
            });
            let code = if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(4)
            };
            Ok((out, code))
        }
        Command::Fixtures => {
            let catalog = json!({
                "weights": {
                    "wA": jsonio::weight_to_value(&lorentz_seq::fixtures::w_a()),
                    "wB": jsonio::weight_to_value(&lorentz_seq::fixtures::w_b(1)),
                    "wB_p2": jsonio::weight_to_value(&lorentz_seq::fixtures::w_b(2)),
                    "wC": jsonio::weight_to_value(&lorentz_seq::fixtures::w_c(1)),
                    "wC_p2": jsonio::weight_to_value(&lorentz_seq::fixtures::w_c(2)),
                    "wD": jsonio::weight_to_value(&lorentz_seq::fixtures::w_d()),
                    "w_zero_mid": jsonio::weight_to_value(&lorentz_seq::fixtures::w_zero_mid()),
                },
                "sequences": {
                    "e1": jsonio::sequence_to_value(&Sequence::basis(1)),
                    "ones_1_2": jsonio::sequence_to_value(&Sequence::finite(vec![
                        lorentz_seq::certified::q_int(1),
                        lorentz_seq::certified::q_int(1),
                    ])),
                    "chi_all": jsonio::sequence_to_value(
                        &Sequence::new(vec![], lorentz_seq::seqcore::Tail::Constant(
                            lorentz_seq::certified::q_int(1),
                        )).expect("fixture"),
                    ),
                    "geometric_half": jsonio::sequence_to_value(
                        &Sequence::new(vec![lorentz_seq::certified::q_int(1)],
                            lorentz_seq::seqcore::Tail::Geometric {
                                a: lorentz_seq::certified::q_int(1),
                                r: lorentz_seq::certified::q_ratio(1, 2),
                            }).expect("fixture"),
                    ),
                },
            });
            Ok((catalog, ExitCode::SUCCESS))
        }
    }
}

fn exit_code_for(err: &Error) -> ExitCode {
    match err {
        Error::Regime(_) | Error::Sphere(_) | Error::Divergent(_) => ExitCode::from(3),
        _ => ExitCode::from(2),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((value, code)) => {
            println!("{}", serde_json::to_string(&value).expect("serializable"));
            code
        }
        Err(e) => {
            let kind = match &e {
                Error::Regime(_) => "regime",
                Error::Sphere(_) => "sphere",
                Error::Divergent(_) => "divergent",
                _ => "usage",
            };
            println!(
                "{}",
                serde_json::to_string(&json!({"error": e.to_string(), "kind": kind}))
                    .expect("serializable")
            );
            exit_code_for(&e)
        }
    }
}
