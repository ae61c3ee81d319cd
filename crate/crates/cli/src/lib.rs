//! Command-line front end: argument parsing, caching policy and report
//! emission. Exit status: 0 when every check agrees with the expected
//! results, 2 when some measured verdict disagrees, 1 on operational errors.

mod output;

use std::io::Write;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use fqmodsym::analysis::{claim_levels, claim_row, prop61_report, ClaimOptions, LevelContext, DEFAULT_GENERATOR_CAP};
use fqmodsym::cache::Cache;
use fqmodsym::error::{Error, Result};
use fqmodsym::ffpoly::{ensure_prime_field, enumerate_monic, Ideal};
use fqmodsym::hecke::{
    hecke_operator, prime_power_relation, restrict_cuspidal, s_matrices, sigma_matrices, HeckeRoute, RouteRegistry,
};
use fqmodsym::linalg::{identity, rank, Field, PrimeField, Rationals};
use fqmodsym::projline::{p1_cardinality, ProjectiveLine};
use fqmodsym::symspace::{build_relations, quotient_basis, z_structure, CuspidalSpace, SymSpace};

pub use output::Format;

#[derive(Parser, Debug)]
#[command(
    name = "fqmodsym",
    version,
    about = "Modular symbols for Gamma_0(n) over F_q[T] and Hecke-algebra kernel elements mod p"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Pretty)]
    pub format: Format,

    /// Directory for cached spaces and operators (disabled when unset).
    #[arg(long, global = true, env = "FQMODSYM_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// Report all timings as 0, for byte-identical output across runs.
    #[arg(long, global = true)]
    pub no_timings: bool,

    /// Refuse levels whose projective line has more points than this.
    #[arg(long, global = true, default_value_t = DEFAULT_GENERATOR_CAP)]
    pub max_generators: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sizes, dimensions, cusps and torsion of SM(n) and SM_0(n).
    Space(SpaceArgs),
    /// Matrix of one Hecke operator T_p.
    Hecke(HeckeArgs),
    /// Table of kernel-element verdicts over prime levels.
    Claims(ClaimsArgs),
    /// Checks the degree-one identity for every monic linear u.
    #[command(name = "verify-prop61")]
    VerifyProp61(LevelArgs),
    /// Smith normal form of the relation matrix.
    Torsion(LevelArgs),
    /// Registered Hecke routes.
    Routes,
    /// Inspect or clear the cache directory.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand, Debug)]
pub enum CacheAction {
    Inspect,
    Clear,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Ring {
    Fp,
    Q,
}

#[derive(Args, Debug)]
pub struct LevelArgs {
    /// Field size (a prime).
    #[arg(long)]
    pub q: u32,
    /// Level generator, e.g. "T^3+T+1".
    #[arg(long)]
    pub n: String,
}

#[derive(Args, Debug)]
pub struct SpaceArgs {
    #[command(flatten)]
    pub level: LevelArgs,
    /// Coefficient rings (repeatable).
    #[arg(long, value_enum, default_values_t = vec![Ring::Fp, Ring::Q])]
    pub ring: Vec<Ring>,
}

#[derive(Args, Debug)]
pub struct HeckeArgs {
    #[command(flatten)]
    pub level: LevelArgs,
    /// Index p of T_p, e.g. "T" or "1".
    #[arg(long)]
    pub p: String,
    #[arg(long, value_enum, default_value_t = Ring::Fp)]
    pub ring: Ring,
    #[arg(long, default_value = "merel")]
    pub route: String,
    /// Compare against every other registered route.
    #[arg(long)]
    pub check_dual: bool,
    /// Restrict to the cuspidal subspace.
    #[arg(long)]
    pub cuspidal: bool,
    /// Print rank, trace and nonzero count instead of the matrix.
    #[arg(long)]
    pub digest: bool,
}

#[derive(Args, Debug)]
pub struct ClaimsArgs {
    #[arg(long)]
    pub q: u32,
    /// Inclusive degree range "A..B", or a single degree.
    #[arg(long, value_parser = parse_degrees)]
    pub degrees: RangeInclusive<usize>,
    /// Largest d for which S_d is evaluated.
    #[arg(long, default_value_t = 3)]
    pub dmax: usize,
    /// Only the first k prime levels of each degree.
    #[arg(long)]
    pub first_k: Option<usize>,
    #[arg(long, default_value = "merel")]
    pub route: String,
    /// Skip the Smith normal form.
    #[arg(long)]
    pub no_torsion: bool,
}

pub fn parse_degrees(s: &str) -> std::result::Result<RangeInclusive<usize>, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("invalid degree {t:?}"));
    match s.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            Ok(num(a)?..=num(b)?)
        }
        None => {
            let d = num(s)?;
            Ok(d..=d)
        }
    }
}

/// Whether all checks agreed with expectations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub consistent: bool,
}

impl Outcome {
    pub fn exit_code(self) -> u8 {
        if self.consistent {
            0
        } else {
            2
        }
    }
}

fn parse_level(args: &LevelArgs, cap: usize) -> Result<Ideal> {
    ensure_prime_field(args.q)?;
    let level = Ideal::parse(args.q, &args.n)?;
    if level.degree() == 0 {
        return Err(Error::DegenerateLevel);
    }
    let size = p1_cardinality(&level);
    if size > cap as u128 {
        return Err(Error::Infeasible { level: level.to_string(), size: size as usize, cap });
    }
    Ok(level)
}

fn route(name: &str) -> Result<Arc<dyn HeckeRoute>> {
    let reg = RouteRegistry::default();
    reg.get(name)
        .ok_or_else(|| Error::Precondition(format!("unknown route {name:?}; registered: {}", reg.names().join(", "))))
}

fn cache(cli: &Cli) -> Result<Option<Cache>> {
    cli.cache_dir.as_ref().map(Cache::open).transpose()
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<Outcome> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cli.jobs {
        builder = builder.num_threads(j.max(1));
    }
    let pool = builder.build().map_err(|e| Error::Precondition(e.to_string()))?;
    let (report, outcome) = pool.install(|| dispatch(cli))?;
    output::emit(&report, cli.format, out)?;
    Ok(outcome)
}

fn dispatch(cli: &Cli) -> Result<(Value, Outcome)> {
    match &cli.command {
        Command::Space(a) => cmd_space(cli, a),
        Command::Hecke(a) => cmd_hecke(cli, a),
        Command::Claims(a) => cmd_claims(cli, a),
        Command::VerifyProp61(a) => cmd_verify_prop61(cli, a),
        Command::Torsion(a) => cmd_torsion(cli, a),
        Command::Routes => {
            let reg = RouteRegistry::default();
            let rows: Vec<Value> =
                reg.iter().map(|r| json!({"name": r.name(), "description": r.description()})).collect();
            Ok((Value::Array(rows), Outcome { consistent: true }))
        }
        Command::Cache { action } => {
            let c = cache(cli)?.ok_or_else(|| {
                Error::Precondition("no cache directory (use --cache-dir or FQMODSYM_CACHE_DIR)".into())
            })?;
            let v = match action {
                CacheAction::Inspect => serde_json::to_value(c.entries()?).expect("serializable"),
                CacheAction::Clear => json!({"removed": c.clear()?}),
            };
            Ok((v, Outcome { consistent: true }))
        }
    }
}

fn load_space<F: Field>(p1: Arc<ProjectiveLine>, field: F, cache: &Option<Cache>) -> Result<SymSpace<F>> {
    if let Some(c) = cache {
        if let Some(sp) = c.load_space(p1.clone(), field.clone())? {
            return Ok(sp);
        }
    }
    let sp = quotient_basis(&build_relations(&p1), p1, field);
    if let Some(c) = cache {
        c.store_space(&sp)?;
    }
    Ok(sp)
}

fn ring_name(r: Ring) -> &'static str {
    match r {
        Ring::Fp => "fp",
        Ring::Q => "q",
    }
}

fn expected_torsion(level: &Ideal) -> Option<Vec<String>> {
    level.is_prime().then(|| if level.degree() % 2 == 1 { vec![] } else { vec![(level.field_size() + 1).to_string()] })
}

fn cmd_space(cli: &Cli, a: &SpaceArgs) -> Result<(Value, Outcome)> {
    let level = parse_level(&a.level, cli.max_generators)?;
    let cache = cache(cli)?;
    let p1 = Arc::new(ProjectiveLine::new(&level)?);
    let mut rings = serde_json::Map::new();
    let mut consistent = true;
    let mut cusps = 0;
    let mut rings_req = a.ring.clone();
    rings_req.dedup();
    for r in rings_req {
        let (dim, dim0, c) = match r {
            Ring::Fp => {
                let sp = Arc::new(load_space(p1.clone(), PrimeField::new(level.field_size()), &cache)?);
                let cs = CuspidalSpace::new(sp.clone());
                (sp.dim(), cs.dim(), cs.cusps().len())
            }
            Ring::Q => {
                let sp = Arc::new(load_space(p1.clone(), Rationals, &cache)?);
                let cs = CuspidalSpace::new(sp.clone());
                (sp.dim(), cs.dim(), cs.cusps().len())
            }
        };
        cusps = c;
        if r == Ring::Q {
            consistent &= dim - dim0 + 1 == c;
        }
        rings.insert(ring_name(r).into(), json!({"dim_sm": dim, "dim_sm0": dim0}));
    }
    let z = z_structure(&build_relations(&p1));
    let torsion: Vec<String> = z.torsion.iter().map(|t| t.to_string()).collect();
    if let Some(want) = expected_torsion(&level) {
        consistent &= want == torsion;
    }
    let report = output::object(vec![
        ("q", json!(level.field_size())),
        ("N", json!(level.to_string())),
        ("deg", json!(level.degree())),
        ("prime", json!(level.is_prime())),
        ("generators", json!(p1.len())),
        ("cusps", json!(cusps)),
        ("rings", Value::Object(rings)),
        ("torsion", json!(torsion)),
        ("torsion_order", json!(z.torsion_order().to_string())),
        ("free_rank", json!(z.free_rank)),
    ]);
    Ok((report, Outcome { consistent }))
}

fn cmd_torsion(cli: &Cli, a: &LevelArgs) -> Result<(Value, Outcome)> {
    let level = parse_level(a, cli.max_generators)?;
    let p1 = ProjectiveLine::new(&level)?;
    let z = z_structure(&build_relations(&p1));
    let torsion: Vec<String> = z.torsion.iter().map(|t| t.to_string()).collect();
    let expected = expected_torsion(&level);
    let consistent = expected.as_ref().is_none_or(|w| *w == torsion);
    let report = output::object(vec![
        ("q", json!(level.field_size())),
        ("N", json!(level.to_string())),
        ("torsion", json!(torsion)),
        ("torsion_order", json!(z.torsion_order().to_string())),
        ("free_rank", json!(z.free_rank)),
        ("nonzero_invariant_factors", json!(z.invariant_factors.len())),
        ("expected_torsion", json!(expected)),
    ]);
    Ok((report, Outcome { consistent }))
}

fn hecke_generic<F: Field>(cli: &Cli, a: &HeckeArgs, level: &Ideal, field: F) -> Result<(Value, Outcome)> {
    let q = level.field_size();
    let p = Ideal::parse(q, &a.p)?;
    let chosen = route(&a.route)?;
    let cache = cache(cli)?;
    let p1 = Arc::new(ProjectiveLine::new(level)?);
    let sp = Arc::new(load_space(p1, field, &cache)?);
    let f = sp.field().clone();

    let compute = |r: &dyn HeckeRoute| -> Result<_> {
        if let Some(c) = &cache {
            if let Some(op) = c.load_op(&sp, &p, r.name())? {
                return Ok(op);
            }
        }
        let op = hecke_operator(r, &p, &sp)?;
        if let Some(c) = &cache {
            c.store_op(&sp, &op, r.name())?;
        }
        Ok(op)
    };
    let op = compute(chosen.as_ref())?;
    let agree = if a.check_dual {
        let reg = RouteRegistry::default();
        let mut all = true;
        for r in reg.iter().filter(|r| r.name() != chosen.name()) {
            all &= compute(r)?.matrix == op.matrix;
        }
        Some(all)
    } else {
        None
    };
    let recurrence = prime_power_relation(chosen.as_ref(), &p, &sp)?;
    let dropped = op.dropped_terms;
    let shown = if a.cuspidal { restrict_cuspidal(&op, &CuspidalSpace::new(sp.clone()))? } else { op };
    let m = &shown.matrix;
    let n = m.rows();
    let is_identity = *m == identity(&f, n);
    let mut pairs = vec![
        ("q", json!(q)),
        ("N", json!(level.to_string())),
        ("p", json!(p.to_string())),
        ("route", json!(chosen.name())),
        ("ring", json!(f.name())),
        ("space", json!(if a.cuspidal { "cuspidal" } else { "ambient" })),
        ("dim", json!(n)),
        ("sigma_p_size", json!(sigma_matrices(&p).len())),
        ("s_p_size", json!(s_matrices(&p, level).len())),
        ("dropped_terms", json!(dropped)),
        ("identity", json!(is_identity)),
        ("agree", json!(agree)),
        ("recurrence", json!(recurrence)),
    ];
    if a.digest {
        let mut trace = f.zero();
        for i in 0..n {
            trace = f.add(&trace, &m[(i, i)]);
        }
        let nonzero = m.entries().iter().filter(|x| !f.is_zero(x)).count();
        pairs.push(("rank", json!(rank(&f, m))));
        pairs.push(("trace", json!(f.format(&trace))));
        pairs.push(("nonzero_entries", json!(nonzero)));
    } else {
        let rows: Vec<Vec<String>> = (0..n).map(|i| m.row(i).iter().map(|x| f.format(x)).collect()).collect();
        pairs.push(("matrix", json!(rows)));
    }
    let consistent = agree != Some(false) && recurrence != Some(false);
    Ok((output::object(pairs), Outcome { consistent }))
}

fn cmd_hecke(cli: &Cli, a: &HeckeArgs) -> Result<(Value, Outcome)> {
    let level = parse_level(&a.level, cli.max_generators)?;
    match a.ring {
        Ring::Fp => hecke_generic(cli, a, &level, PrimeField::new(level.field_size())),
        Ring::Q => hecke_generic(cli, a, &level, Rationals),
    }
}

fn cmd_claims(cli: &Cli, a: &ClaimsArgs) -> Result<(Value, Outcome)> {
    ensure_prime_field(a.q)?;
    let opts = ClaimOptions {
        dmax: a.dmax,
        first_k: a.first_k,
        generator_cap: cli.max_generators,
        route: route(&a.route)?,
        cache: cache(cli)?,
        torsion: !a.no_torsion,
        timings: !cli.no_timings,
    };
    use rayon::prelude::*;
    let levels = claim_levels(a.q, a.degrees.clone(), a.first_k);
    let rows = levels.par_iter().map(|n| claim_row(n, &opts)).collect::<Result<Vec<_>>>()?;
    let consistent = rows.iter().all(|r| r.mismatches.is_empty());
    Ok((serde_json::to_value(rows).expect("serializable"), Outcome { consistent }))
}

fn cmd_verify_prop61(cli: &Cli, a: &LevelArgs) -> Result<(Value, Outcome)> {
    let level = parse_level(a, cli.max_generators)?;
    if level.has_degree_one_factor() {
        return Err(Error::Precondition(format!(
            "the identity requires a level with no degree-1 factor; {level} has one"
        )));
    }
    let mut ctx = LevelContext::open(&level, route("merel")?, cache(cli)?)?;
    let mut rows = Vec::new();
    let mut consistent = true;
    for u in enumerate_monic(level.field_size(), 1, false) {
        let r = prop61_report(&mut ctx, &u)?;
        consistent &= r.holds;
        rows.push(json!({
            "q": level.field_size(),
            "N": level.to_string(),
            "u": r.u,
            "holds": r.holds,
            "family_size": r.certificate.family_size,
            "family_rank": r.certificate.family_rank,
            "rhs_nonzero_coefficients": r.certificate.nonzero_coefficients,
        }));
    }
    Ok((Value::Array(rows), Outcome { consistent }))
}
