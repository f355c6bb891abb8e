use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};

use confstab::conf_algebra::{dims_table, first_inceptive, lambda_range, mu, table_audit, Bound, RangeFn};
use confstab::degree_calculus::{zigzag, ManifoldDescriptor};
use confstab::loop_homology::{self as loops, LoopSpec, DEFAULT_SAMPLES};
use confstab::padic::{nsh_bound, period, NshBound, PrimeSet};
use confstab::sphere_les::{h1_s2, h1_s2_dim_mod_p, hn1_dichotomy};
use confstab::stability_oracle::{oracle_in_range, witness_chain, CoefficientSpec, RangeSpec};
use confstab::Error;

#[derive(Parser)]
#[command(name = "confstab", version, about = "Homological stability of configuration spaces, in exact arithmetic")]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Dimensions of H_i(C_k(R^n); F_p) for i ≤ imax.
    Dims {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        p: u64,
        /// One or more weights, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        k: Vec<u64>,
        #[arg(long)]
        imax: u64,
    },
    /// Lowest-degree class of weight k not coming from stabilisation.
    Inceptive {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u64,
    },
    /// Compare the tabulated first inceptive class with the computed one.
    TableAudit {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u64,
    },
    /// Stabilisation range for given coefficients.
    Mu {
        #[arg(long)]
        coeff: CoefficientSpec,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        non_orientable: bool,
        #[arg(long)]
        labels: bool,
    },
    /// Range of the replication argument built from a stabilisation range.
    Lambda {
        #[arg(long)]
        mu: Bound,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        k: i64,
    },
    /// Whether H_*(C_k(M)) and H_*(C_j(M)) are guaranteed isomorphic in the stable range.
    Oracle {
        #[command(flatten)]
        manifold: ManifoldArgs,
        /// Characteristic of the coefficient field (0 for Q).
        #[arg(long = "char", conflicts_with = "coeff")]
        characteristic: Option<u64>,
        #[arg(long)]
        coeff: Option<CoefficientSpec>,
        #[arg(long, allow_hyphen_values = true)]
        k: BigInt,
        #[arg(long, allow_hyphen_values = true)]
        j: BigInt,
        /// Report the range λ computed from this stabilisation range.
        #[arg(long, requires = "r")]
        mu: Option<Bound>,
        #[arg(long, requires = "mu")]
        r: Option<u32>,
    },
    /// Zigzag of degree actions relating k and j after localising at a set of primes.
    Zigzag {
        #[arg(long, allow_hyphen_values = true)]
        k: BigInt,
        #[arg(long, allow_hyphen_values = true)]
        j: BigInt,
        #[arg(long, allow_hyphen_values = true)]
        chi: BigInt,
        /// Comma-separated primes, or ALL.
        #[arg(long)]
        primes: PrimeSet,
    },
    /// Chain of replication and zigzag moves from k to j over F_p.
    Witness {
        #[command(flatten)]
        manifold: ManifoldArgs,
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        k: BigInt,
        #[arg(long, allow_hyphen_values = true)]
        j: BigInt,
    },
    /// Period in k of the mod-p stable invariant.
    Period {
        #[arg(long, allow_hyphen_values = true)]
        chi: BigInt,
        #[arg(long)]
        p: u64,
    },
    /// Bound on the number of distinct mod-p stable homologies.
    Nsh {
        #[arg(long, allow_hyphen_values = true)]
        chi: BigInt,
        #[arg(long)]
        p: u64,
    },
    /// Homology class of a loop given as JSON.
    LoopClass {
        /// Read the loop from this file instead of standard input.
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Build one of the standard loops as JSON.
    LoopBuild {
        #[arg(long, value_enum)]
        kind: LoopKind,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        j: Option<usize>,
        /// Degree of the circle map for `sigma`.
        #[arg(long, allow_hyphen_values = true)]
        d: Option<i64>,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
    },
    /// Check both boundary relations of the pair of pants.
    Pants {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        j: usize,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
    },
    /// Failure of replication to commute with the degree action.
    Obstruction {
        #[arg(long, allow_hyphen_values = true)]
        chi: BigInt,
        #[arg(long)]
        r: BigInt,
        #[arg(long)]
        p: Option<u64>,
    },
    /// Order of H_1(C_k(S^2); Z).
    #[command(name = "s2-h1")]
    S2H1 {
        #[arg(long)]
        k: u64,
    },
    /// dim H_1(C_k(S^2); F_p).
    #[command(name = "s2-modp")]
    S2Modp {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        p: u64,
    },
    /// Whether dim H_{n-1}(C_k(S^n); F_p) agrees for k and j.
    Dichotomy {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        j: u64,
        /// Stable range as a function of k, e.g. `k/2`.
        #[arg(long, default_value = "k")]
        range: Bound,
    },
}

#[derive(clap::Args)]
struct ManifoldArgs {
    #[arg(long)]
    dim: u32,
    #[arg(long, allow_hyphen_values = true)]
    chi: BigInt,
    #[arg(long)]
    open: bool,
    #[arg(long)]
    non_orientable: bool,
    /// The manifold is a round sphere.
    #[arg(long)]
    sphere: bool,
}

impl ManifoldArgs {
    fn descriptor(&self) -> Result<ManifoldDescriptor, Error> {
        let mut m = ManifoldDescriptor::new(self.dim, self.chi.clone(), !self.open, !self.non_orientable)?;
        m.sphere = self.sphere;
        Ok(m)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum LoopKind {
    Delta,
    Pi,
    Tau,
    Sigma,
    DeltaHat,
    TauHat,
    FullTwist,
    Connecting,
}

/// Exit status 2 for malformed input, 1 for domain errors.
enum Failure {
    Parse(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

struct Output {
    value: Value,
    text: String,
}

fn out(value: impl Serialize, text: impl Into<String>) -> Output {
    Output { value: serde_json::to_value(value).expect("serialisable"), text: text.into() }
}

fn need<T>(x: Option<T>, what: &str) -> Result<T, Failure> {
    x.ok_or_else(|| Failure::Parse(format!("--{what} is required for this loop")))
}

fn run(cmd: Cmd) -> Result<Output, Failure> {
    Ok(match cmd {
        Cmd::Dims { n, p, k, imax } => {
            let table = dims_table(n, p, k, imax)?;
            let text = table
                .rows
                .iter()
                .map(|r| {
                    let ds: Vec<String> = r.dims.iter().map(ToString::to_string).collect();
                    format!("k={}: {}", r.k, ds.join(" "))
                })
                .collect::<Vec<_>>()
                .join("\n");
            out(&table, text)
        }
        Cmd::Inceptive { n, p, k } => {
            let inc = first_inceptive(n, p, k)?;
            let text = match &inc {
                None => "none".to_string(),
                Some(i) => {
                    let ws: Vec<String> = i.witnesses.iter().map(ToString::to_string).collect();
                    format!("degree {}: {}", i.degree, ws.join(", "))
                }
            };
            out(&inc, text)
        }
        Cmd::TableAudit { p, n, k } => {
            let a = table_audit(p, n, k)?;
            let row = a.row.map_or("-".to_string(), |r| r.to_string());
            let computed = a.computed.as_ref().map_or("none".to_string(), |c| c.degree.to_string());
            let text = format!("row {row}: {:?} (computed degree {computed})", a.status);
            out(&a, text)
        }
        Cmd::Mu { coeff, n, non_orientable, labels } => {
            let b = mu(&coeff, n, !non_orientable, labels)?;
            out(json!({ "coeff": coeff.to_string(), "bound": b, "display": b.to_string() }), b.to_string())
        }
        Cmd::Lambda { mu, n, r, k } => {
            let v = lambda_range(&mu, n, r, k)?;
            out(json!({ "lambda": v }), v.map_or("no bound".to_string(), |x| x.to_string()))
        }
        Cmd::Oracle { manifold, characteristic, coeff, k, j, mu, r } => {
            let m = manifold.descriptor()?;
            let coeff = match (characteristic, coeff) {
                (Some(c), _) => CoefficientSpec::of_characteristic(c)?,
                (None, Some(c)) => c,
                (None, None) => return Err(Failure::Parse("one of --char or --coeff is required".into())),
            };
            let spec = mu.zip(r).map(|(mu, r)| RangeSpec { mu, r });
            let v = oracle_in_range(&m, &coeff, &k, &j, spec.as_ref())?;
            let text = format!(
                "{}: {}",
                if v.iso_guaranteed { "isomorphic" } else { "not guaranteed" },
                v.basis
            );
            out(&v, text)
        }
        Cmd::Zigzag { k, j, chi, primes } => {
            let w = zigzag(&k, &j, &chi, &primes)?;
            let text = match &w {
                None => "no zigzag".to_string(),
                Some(w) => format!("meet at {} with {} moves", w.h, w.moves.len()),
            };
            out(&w, text)
        }
        Cmd::Witness { manifold, p, k, j } => {
            let m = manifold.descriptor()?;
            let chain = witness_chain(&m, p, &k, &j)?;
            let text = match &chain {
                None => "no chain".to_string(),
                Some(c) => format!("{} steps", c.len()),
            };
            out(&chain, text)
        }
        Cmd::Period { chi, p } => {
            let per = period(&chi, p)?;
            out(json!({ "period": per.to_string() }), per.to_string())
        }
        Cmd::Nsh { chi, p } => {
            let (value, text) = match nsh_bound(&chi, p)? {
                NshBound::Bounded(x) => (json!(x), x.to_string()),
                NshBound::Unbounded => (json!("unbounded"), "unbounded".to_string()),
            };
            out(json!({ "bound": value }), text)
        }
        Cmd::LoopClass { file } => {
            let raw = match file {
                Some(path) => std::fs::read_to_string(&path)
                    .map_err(|e| Failure::Parse(format!("cannot read {}: {e}", path.display())))?,
                None => {
                    let mut s = String::new();
                    std::io::stdin()
                        .read_to_string(&mut s)
                        .map_err(|e| Failure::Parse(format!("cannot read standard input: {e}")))?;
                    s
                }
            };
            let l: LoopSpec = serde_json::from_str(&raw).map_err(|e| Failure::Parse(format!("bad loop: {e}")))?;
            let c = loops::evaluate(&l)?;
            let text = match c.a {
                Some(a) => format!("{a}·Δ0 + {}·π", c.b),
                None => format!("{}·π", c.b),
            };
            out(c, text)
        }
        Cmd::LoopBuild { kind, k, j, d, samples } => {
            let l = match kind {
                LoopKind::Delta => loops::build_delta(k, need(j, "j")?, samples)?,
                LoopKind::Pi => loops::build_pi(k, samples)?,
                LoopKind::Tau => loops::build_tau(k, need(j, "j")?, samples)?,
                LoopKind::Sigma => loops::build_sigma(k, need(d, "d")?, samples)?,
                LoopKind::DeltaHat => loops::build_delta_hat(k, samples)?,
                LoopKind::TauHat => loops::build_tau_hat(k, samples)?,
                LoopKind::FullTwist => loops::build_full_twist(k, samples)?,
                LoopKind::Connecting => loops::build_connecting(k, samples)?,
            };
            let text = serde_json::to_string(&l).expect("serialisable");
            out(&l, text)
        }
        Cmd::Pants { k, j, samples } => {
            let pc = loops::pants_check(k, j, samples)?;
            out(&pc, if pc.holds { "both relations hold" } else { "relation fails" })
        }
        Cmd::Obstruction { chi, r, p } => {
            let o = loops::obstruction(&chi, &r)?;
            let commutes = p.map(|p| loops::commutes_mod(&chi, &r, p)).transpose()?;
            let text = match commutes {
                None => o.to_string(),
                Some(c) => format!("{o} ({})", if c { "commutes" } else { "does not commute" }),
            };
            out(json!({ "obstruction": o.to_string(), "commutes": commutes }), text)
        }
        Cmd::S2H1 { k } => {
            let h = h1_s2(k)?;
            out(h, h.to_string())
        }
        Cmd::S2Modp { k, p } => {
            let d = h1_s2_dim_mod_p(k, p)?;
            out(d, d.to_string())
        }
        Cmd::Dichotomy { n, p, k, j, range } => {
            let same = hn1_dichotomy(n, p, k, j, &RangeFn::Mu { bound: range })?;
            out(json!({ "equal": same }), if same { "equal" } else { "different" })
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            let msg = e.to_string();
            let detail = msg.lines().next().unwrap_or_default().trim_start_matches("error: ");
            println!("{}", json!({ "error": "parse", "detail": detail }));
            return ExitCode::from(2);
        }
    };
    match run(cli.cmd) {
        Ok(o) => {
            if cli.json {
                println!("{}", o.value);
            } else {
                println!("{}", o.text);
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            let (code, err, detail) = match f {
                Failure::Parse(msg) => (2, "parse", msg),
                Failure::Domain(e) => (1, e.kind(), e.to_string()),
            };
            println!("{}", json!({ "error": err, "detail": detail }));
            ExitCode::from(code)
        }
    }
}
