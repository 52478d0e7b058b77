use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use rand::Rng;
use tcover::broken::{repeat_count, theta_inner, theta_value, BlockStructure, TaggedQDecomposition};
use tcover::format;
use tcover::numeric::{Real, PRECISION_BITS};
use tcover::ring::{ExactRational, Field, Gf2, Gf3, Gf5, Gf7, RingTag, ScalarRing};
use tcover::seed::stream;
use tcover::setcover::{
    baseline_bellman, check_epsilon, runtime_exponent_bases, solve_setcover, validate_constants, Backend,
    BrokenConfig, SetCoverInstance, Witness,
};
use tcover::subsetconv::{
    brute_partition_count, brute_subset_convolution, subset_convolution, trilinear_partition_count, IndicatorVector,
    SetFamily,
};
use tcover::tensor::{
    build_p_power, build_q, find_tightness_witness, verify_border_decomposition, verify_rank_decomposition, Tensor3,
    DEFAULT_TIGHTNESS_BOUND,
};

use crate::args::*;
use crate::report::*;

/// Everything a command prints, and its exit status.
#[derive(Debug, Default)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// The shipped border witness of P.
pub const P_BORDER: &str = include_str!("../data/p_border.txt");

/// Digits printed for reals.
const DIGITS: usize = 30;

/// Universe sizes up to which `--backend auto` picks the exact backend.
const AUTO_EXACT_MAX_N: usize = 20;

macro_rules! with_ring {
    ($tag:expr, $R:ident => $body:expr) => {
        match $tag {
            RingTag::Rational => {
                type $R = ExactRational;
                $body
            }
            RingTag::Gf2 => {
                type $R = Gf2;
                $body
            }
            RingTag::Gf3 => {
                type $R = Gf3;
                $body
            }
            RingTag::Gf5 => {
                type $R = Gf5;
                $body
            }
            RingTag::Gf7 => {
                type $R = Gf7;
                $body
            }
        }
    };
}

pub fn dispatch(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Solve(a) => solve(cli, a),
        Command::Partition3(a) => partition3(cli, a),
        Command::Convolve(a) => convolve(cli, a),
        Command::Verify(a) => verify(cli, a),
        Command::Analyze(a) => analyze(cli, a),
        Command::Bench(a) => bench(cli, a),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn parse_ring(s: &str) -> Result<RingTag> {
    RingTag::parse(s).ok_or_else(|| anyhow!("unknown ring `{s}` (expected q, gf2, gf3, gf5 or gf7)"))
}

fn real(s: &str, name: &str) -> Result<Real> {
    Real::parse(s).with_context(|| format!("--{name}"))
}

fn json(value: &impl serde::Serialize) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn yes_no(b: bool) -> String {
    if b { "YES" } else { "NO" }.to_string()
}

/// Load or build the Q decomposition and fix `q` and the repeat budget.
fn broken_config(a: &BrokenArgs, n: usize, seed: u64) -> Result<(BrokenConfig, BrokenSummary)> {
    let sigma = real(&a.sigma, "sigma")?;
    let tau = real(&a.tau, "tau")?;
    theta_inner(&sigma, &tau)?;
    let ring = a.ring.as_deref().map(parse_ring).transpose()?;
    let mut dec = match &a.decomp {
        Some(path) => {
            let dec = format::parse_qdecomp(&read(path)?).with_context(|| format!("in {}", path.display()))?;
            if ring.is_some_and(|r| r != dec.tag()) {
                bail!("--ring conflicts with the `{}` decomposition in {}", dec.tag(), path.display());
            }
            if a.d != 1 && a.d != dec.d() {
                bail!("--d {} conflicts with the decomposition of Q^⊗{}", a.d, dec.d());
            }
            dec
        }
        None => TaggedQDecomposition::trivial(ring.unwrap_or(RingTag::Gf2), a.d)?,
    };
    if a.skip_verify {
        dec.assume_verified();
    } else if !dec.is_verified() {
        let ok = dec.verify().context("cannot check the decomposition; pass --skip-verify to use it unchecked")?;
        if !ok {
            bail!("the decomposition does not reproduce Q^⊗{}", dec.d());
        }
    }
    let d = dec.d();
    let q_default = sigma.mul(&Real::from_i64(n as i64)).floor_bigint()?;
    let q_default = usize::try_from(q_default).unwrap_or(0) / d;
    let q = a.q.unwrap_or(q_default).min(n / (3 * d));
    let repeats = match a.repeats {
        Some(s) => s,
        None => {
            let s = repeat_count(n.max(1), &theta_value(&sigma, &tau)?)?;
            u64::try_from(&s).map_err(|_| anyhow!("repeat count {s} is too large; pass --repeats"))?
        }
    };
    let summary = BrokenSummary {
        ring: dec.tag().to_string(),
        d,
        q,
        p: n - 3 * d * q,
        repeats_budget: repeats,
        decomposition_rank: dec.rank(),
        verified: !a.skip_verify,
    };
    Ok((BrokenConfig { decomposition: dec, q, repeats, seed }, summary))
}

fn use_broken(choice: BackendChoice, n: usize) -> bool {
    match choice {
        BackendChoice::Auto => n > AUTO_EXACT_MAX_N,
        BackendChoice::Exact => false,
        BackendChoice::Broken => true,
    }
}

fn solve(cli: &Cli, a: &SolveArgs) -> Result<Output> {
    let inst = format::parse_instance(&read(&a.instance)?).with_context(|| format!("in {}", a.instance.display()))?;
    let n = inst.n();
    let sigma = real(&a.broken.sigma, "sigma")?;
    let tau = real(&a.broken.tau, "tau")?;
    theta_inner(&sigma, &tau)?;
    let (backend, broken) = if use_broken(a.backend, n) {
        let (cfg, summary) = broken_config(&a.broken, n, cli.seed)?;
        (Backend::Broken(cfg), Some(summary))
    } else {
        (Backend::Exact, None)
    };
    let outcome = solve_setcover(&inst, &backend, &tau)?;
    let oracle = if a.oracle { Some(baseline_bellman(&inst)?) } else { None };
    let mut out = Output { code: if outcome.answer { 0 } else { 1 }, ..Output::default() };
    if let Some(o) = oracle.filter(|&o| o != outcome.answer) {
        out.code = 3;
        writeln!(out.stderr, "oracle disagreement: solver says {}, baseline says {}", yes_no(outcome.answer), yes_no(o))?;
    }
    let (witness, triple) = match outcome.witness {
        None => (None, None),
        Some(Witness::Empty) => (Some("empty"), None),
        Some(Witness::Single) => (Some("single"), None),
        Some(Witness::Pair) => (Some("pair"), None),
        Some(Witness::Triple(a, b, c)) => (Some("triple"), Some([a, b, c])),
    };
    if cli.json {
        out.stdout = json(&SolveReport {
            answer: yes_no(outcome.answer),
            backend: if broken.is_some() { "broken" } else { "exact" }.into(),
            n,
            m: inst.family.len(),
            t: inst.t,
            k: inst.k,
            seed: cli.seed,
            witness: witness.map(str::to_string),
            triple,
            triples_tried: outcome.triples_tried,
            repeats: outcome.repeats,
            broken,
            oracle: oracle.map(yes_no),
        })?;
    } else {
        writeln!(out.stdout, "{}", yes_no(outcome.answer))?;
    }
    Ok(out)
}

fn load_families(paths: &[std::path::PathBuf]) -> Result<[SetFamily; 3]> {
    let fams: Vec<SetFamily> = paths
        .iter()
        .map(|p| format::parse_family(&read(p)?).with_context(|| format!("in {}", p.display())))
        .collect::<Result<_>>()?;
    let [f, g, h]: [SetFamily; 3] = fams.try_into().map_err(|_| anyhow!("need exactly three families"))?;
    if f.n() != g.n() || f.n() != h.n() {
        bail!("families are over different universes ({}, {}, {})", f.n(), g.n(), h.n());
    }
    Ok([f, g, h])
}

fn partition3(cli: &Cli, a: &Partition3Args) -> Result<Output> {
    let [f, g, h] = load_families(&a.families)?;
    let n = f.n();
    let oracle = if a.oracle { Some(brute_partition_count(&f, &g, &h)?) } else { None };
    let mut out = Output::default();
    let report = if use_broken(a.backend, n) {
        let (cfg, summary) = broken_config(&a.broken, n, cli.seed)?;
        let bs = BlockStructure::for_universe(n, summary.d, summary.q)?;
        let res = cfg.decomposition.wrapper(&f, &g, &h, &bs, cfg.repeats, cfg.seed)?;
        out.code = if res.found { 0 } else { 1 };
        if oracle.is_some_and(|c| (c > 0) != res.found) {
            out.code = 3;
            writeln!(out.stderr, "oracle disagreement: brute force counts {}", oracle.unwrap_or(0))?;
        }
        let verdict = if res.found { "FOUND" } else { "NOT FOUND" };
        writeln!(out.stdout, "{verdict} after {} repeats", res.repeats)?;
        Partition3Report {
            backend: "broken".into(),
            ring: summary.ring.clone(),
            n,
            seed: cli.seed,
            count: None,
            found: Some(res.found),
            repeats: Some(res.repeats),
            broken: Some(summary),
            oracle,
        }
    } else {
        let tag = a.broken.ring.as_deref().map(parse_ring).transpose()?.unwrap_or(RingTag::Rational);
        let count = with_ring!(tag, R => trilinear_partition_count::<R>(&f, &g, &h)?.render());
        if let Some(c) = oracle {
            let expect = match tag.characteristic() {
                0 => c.to_string(),
                p => (c % u64::from(p)).to_string(),
            };
            if expect != count {
                out.code = 3;
                writeln!(out.stderr, "oracle disagreement: brute force gives {expect}")?;
            }
        }
        writeln!(out.stdout, "count {count}")?;
        Partition3Report {
            backend: "exact".into(),
            ring: tag.to_string(),
            n,
            seed: cli.seed,
            count: Some(count),
            found: None,
            repeats: None,
            broken: None,
            oracle,
        }
    };
    if cli.json {
        out.stdout = json(&report)?;
    }
    Ok(out)
}

fn convolve_in<R: ScalarRing>(u: &str, v: &str, oracle: bool) -> Result<(IndicatorVector<R>, Option<bool>)> {
    let u = format::parse_vector::<R>(u)?;
    let v = format::parse_vector::<R>(v)?;
    if u.n() != v.n() {
        bail!("vectors over different universes ({} and {})", u.n(), v.n());
    }
    let w = subset_convolution(&u, &v)?;
    let check = if oracle { Some(brute_subset_convolution(&u, &v)? == w) } else { None };
    Ok((w, check))
}

fn convolve(cli: &Cli, a: &ConvolveArgs) -> Result<Output> {
    let texts: Vec<String> = a.vectors.iter().map(|p| read(p)).collect::<Result<_>>()?;
    let tag = format::ring_tag_of(&texts[0])?;
    if format::ring_tag_of(&texts[1])? != tag {
        bail!("the two vectors use different rings");
    }
    let mut out = Output::default();
    let (n, text, entries, check) = with_ring!(tag, R => {
        let (w, check) = convolve_in::<R>(&texts[0], &texts[1], a.oracle)?;
        (w.n(), format::write_vector(&w), w.entries().iter().map(ScalarRing::render).collect::<Vec<_>>(), check)
    });
    if check == Some(false) {
        out.code = 3;
        writeln!(out.stderr, "oracle disagreement: direct summation differs")?;
    }
    out.stdout = if cli.json {
        json(&ConvolveReport { n, ring: tag.to_string(), entries, oracle: check })?
    } else {
        text
    };
    Ok(out)
}

fn check(name: &str, ok: bool, detail: impl Into<String>) -> Check {
    Check { name: name.into(), ok, detail: detail.into() }
}

fn tensor_checks<R: ScalarRing + Field>(t: &Tensor3<R>) -> Vec<Check> {
    let ranks = t.flattening_ranks();
    vec![
        check("shape", true, format!("{:?}, support {}", t.dims(), t.support_size())),
        check("concise", t.is_concise(), format!("flattening ranks {ranks:?}")),
    ]
}

/// `P^⊗k` when `dims` is `(2^k, 2^k, 2^k)`.
fn default_border_target<R: ScalarRing>(dims: (usize, usize, usize)) -> Result<Tensor3<R>> {
    let (m, n, p) = dims;
    if m == n && n == p && m.is_power_of_two() {
        return Ok(build_p_power::<R>(m.trailing_zeros() as usize)?);
    }
    bail!("no default target for a {m}×{n}×{p} border decomposition; pass --tensor")
}

fn verify_file<R: ScalarRing + Field>(kind: &str, text: &str, target: Option<&str>) -> Result<Vec<Check>> {
    let load_target = |t: &str| -> Result<Tensor3<R>> { Ok(format::parse_tensor::<R>(t)?) };
    Ok(match kind {
        "tensor" => tensor_checks(&format::parse_tensor::<R>(text)?),
        "decomp" => {
            let d = format::parse_decomposition::<R>(text)?;
            let t = load_target(target.ok_or_else(|| anyhow!("a rank decomposition needs --tensor"))?)?;
            vec![check("reassembly", verify_rank_decomposition(&d, &t), format!("rank {}", d.rank()))]
        }
        "border" => {
            let d = format::parse_border::<R>(text)?;
            let t = match target {
                Some(t) => load_target(t)?,
                None => default_border_target::<R>(d.dims())?,
            };
            let detail = format!("rank {}, degree {}, error tensor {}", d.rank(), d.degree, d.error.is_some());
            vec![check(&format!("border over {}", R::TAG), verify_border_decomposition(&d, &t), detail)]
        }
        other => bail!("cannot verify a `{other}` file"),
    })
}

fn q_checks() -> Vec<Check> {
    fn ranks<R: ScalarRing + Field>() -> Check {
        let r = build_q::<R>().flattening_ranks();
        check(&format!("flattening ranks over {}", R::TAG), r == [7, 7, 7], format!("{r:?}"))
    }
    let q = build_q::<ExactRational>();
    let mut checks = vec![check("support", q.support_size() == 24, format!("{} entries", q.support_size()))];
    checks.extend([ranks::<ExactRational>(), ranks::<Gf2>(), ranks::<Gf3>(), ranks::<Gf5>(), ranks::<Gf7>()]);
    checks.push(match find_tightness_witness(&q, DEFAULT_TIGHTNESS_BOUND) {
        Some(w) => check("tight", w.check(&q), format!("mu {:?} nu {:?} pi {:?}", w.mu, w.nu, w.pi)),
        None => check("tight", false, format!("no witness with labels up to {DEFAULT_TIGHTNESS_BOUND}")),
    });
    checks
}

fn verify(cli: &Cli, a: &VerifyArgs) -> Result<Output> {
    let ring = a.ring.as_deref().map(parse_ring).transpose()?;
    let (kind, checks) = match a.target.as_str() {
        "q" => ("q".to_string(), q_checks()),
        name => {
            let text = if name == "p-border" { P_BORDER.to_string() } else { read(Path::new(name))? };
            let kind = format::header_kind(&text)?;
            let target = a.tensor.as_deref().map(read).transpose()?;
            let rings = match (ring, name) {
                (Some(r), _) => vec![r],
                (None, "p-border") => vec![RingTag::Rational, RingTag::Gf2, RingTag::Gf3, RingTag::Gf5, RingTag::Gf7],
                (None, _) => vec![],
            };
            let checks = if kind == "qdecomp" {
                let mut dec = format::parse_qdecomp(&text)?;
                let ok = dec.verify()?;
                vec![check("reassembly", ok, format!("Q^⊗{} over {}, rank {}", dec.d(), dec.tag(), dec.rank()))]
            } else if rings.is_empty() {
                let tag = format::ring_tag_of(&text)?;
                with_ring!(tag, R => verify_file::<R>(&kind, &text, target.as_deref())?)
            } else {
                let mut all = Vec::new();
                for r in rings {
                    let text = format::retag(&text, r)?;
                    let target = target.as_deref().map(|t| format::retag(t, r)).transpose()?;
                    all.extend(with_ring!(r, R => verify_file::<R>(&kind, &text, target.as_deref())?));
                }
                all
            };
            (kind, checks)
        }
    };
    // A tensor file is only described; decompositions and Q must pass.
    let ok = kind == "tensor" || checks.iter().all(|c| c.ok);
    let mut out = Output { code: if ok { 0 } else { 2 }, ..Output::default() };
    if cli.json {
        out.stdout = json(&VerifyReport { target: a.target.clone(), kind, ok, checks })?;
    } else {
        for c in &checks {
            writeln!(out.stdout, "{} {}: {}", if c.ok { "OK" } else { "FAIL" }, c.name, c.detail)?;
        }
        writeln!(out.stdout, "{}", if ok { "OK" } else { "FAIL" })?;
    }
    Ok(out)
}

fn analyze(cli: &Cli, a: &AnalyzeArgs) -> Result<Output> {
    let sigma = real(&a.sigma, "sigma")?;
    let tau = real(&a.tau, "tau")?;
    let rho = real(&a.rho, "rho")?;
    let kappa = real(&a.kappa, "kappa")?;
    let beta = real(&a.beta, "beta")?;
    let delta = real(&a.delta, "delta")?;
    let theta = theta_value(&sigma, &tau)?;
    let s = repeat_count(a.n.max(1), &theta)?;
    let bases = runtime_exponent_bases(&sigma, &tau, &rho)?;
    let margin = bases.margin();
    let constants = validate_constants(&kappa, &beta)?;
    let sci = |x: &Real| x.to_sci(DIGITS);
    let report = AnalyzeReport {
        precision_bits: PRECISION_BITS,
        printed_digits: DIGITS,
        sigma: sci(&sigma),
        tau: sci(&tau),
        rho: sci(&rho),
        n: a.n,
        theta: sci(&theta),
        theta_pow_n: sci(&theta.powi(a.n)),
        repeats: s.to_string(),
        b1: sci(&bases.b1),
        b2: sci(&bases.b2),
        max_base: sci(&bases.max()),
        margin: sci(&margin),
        delta: sci(&delta),
        below_two: margin.is_positive(),
        margin_exceeds_delta: margin > delta,
        kappa: sci(&kappa),
        beta: sci(&beta),
        constants_lhs: sci(&constants.lhs),
        largest_epsilon: sci(&constants.epsilon()),
        holds_at_epsilon_kappa: check_epsilon(&kappa, &beta, &kappa)?,
    };
    let mut out = Output::default();
    if cli.json {
        out.stdout = json(&report)?;
        return Ok(out);
    }
    let o = &mut out.stdout;
    writeln!(o, "# reals carry {PRECISION_BITS}-bit mantissas and are printed to {DIGITS} significant digits")?;
    writeln!(o, "sigma = {}", report.sigma)?;
    writeln!(o, "tau = {}", report.tau)?;
    writeln!(o, "rho = {}", report.rho)?;
    writeln!(o, "theta = {}", report.theta)?;
    writeln!(o, "theta^n (n = {}) = {}", a.n, report.theta_pow_n)?;
    writeln!(o, "repeats s = ceil(theta^-n * n) = {}", report.repeats)?;
    writeln!(o, "b1 = {}", report.b1)?;
    writeln!(o, "b2 = {}", report.b2)?;
    writeln!(o, "max(b1, b2) = {}", report.max_base)?;
    writeln!(o, "margin 2 - max(b1, b2) = {}", report.margin)?;
    writeln!(o, "max base below 2: {}", report.below_two)?;
    writeln!(o, "margin exceeds delta = {}: {}", report.delta, report.margin_exceeds_delta)?;
    writeln!(o, "(2 - beta) * 2^kappa * 2^H(kappa) = {}", report.constants_lhs)?;
    writeln!(o, "largest epsilon = 10^-j below the gap: {}", report.largest_epsilon)?;
    writeln!(o, "inequality holds at epsilon = kappa: {}", report.holds_at_epsilon_kappa)?;
    Ok(out)
}

fn random_instance(rng: &mut impl Rng, n: usize) -> Result<SetCoverInstance> {
    let t = rng.random_range(1..=n);
    let sets = (0..2 * n).map(|_| {
        let mut s = 0u64;
        while s.count_ones() < 3.min(n as u32) {
            s |= 1 << rng.random_range(0..n);
        }
        s
    });
    Ok(SetCoverInstance::new(SetFamily::new(n, sets)?, t)?)
}

fn millis(start: Instant) -> f64 {
    (start.elapsed().as_secs_f64() * 1e5).round() / 100.0
}

/// Timings vary from run to run; only the agreement column is reproducible.
fn bench(cli: &Cli, a: &BenchArgs) -> Result<Output> {
    if a.n_min == 0 || a.n_min > a.n_max {
        bail!("need 1 ≤ --n-min ≤ --n-max");
    }
    let tau = Real::from_ratio(1, 1000);
    let mut rows = Vec::new();
    for n in a.n_min..=a.n_max {
        let mut rng = stream(cli.seed, &[n as u64]);
        let vec_of = |rng: &mut rand_chacha::ChaCha8Rng| -> Result<IndicatorVector<ExactRational>> {
            Ok(IndicatorVector::new(n, (0..1 << n).map(|_| ExactRational::integer(rng.random_range(-9..=9))).collect())?)
        };
        let (u, v) = (vec_of(&mut rng)?, vec_of(&mut rng)?);
        let start = Instant::now();
        subset_convolution(&u, &v)?;
        let convolution_ms = millis(start);

        let fam = |rng: &mut rand_chacha::ChaCha8Rng| SetFamily::new(n, (0..4 * n).map(|_| rng.random_range(0..1u64 << n)));
        let (f, g, h) = (fam(&mut rng)?, fam(&mut rng)?, fam(&mut rng)?);
        let start = Instant::now();
        trilinear_partition_count::<ExactRational>(&f, &g, &h)?;
        let partition_count_ms = millis(start);

        let inst = random_instance(&mut rng, n)?;
        let start = Instant::now();
        let got = solve_setcover(&inst, &Backend::Exact, &tau)?.answer;
        let solve_exact_ms = millis(start);
        let start = Instant::now();
        let expect = baseline_bellman(&inst)?;
        let bellman_ms = millis(start);
        rows.push(BenchRow { n, convolution_ms, partition_count_ms, solve_exact_ms, bellman_ms, agree: got == expect });
    }
    let mut out = Output::default();
    if rows.iter().any(|r| !r.agree) {
        out.code = 3;
        writeln!(out.stderr, "oracle disagreement in the set cover benchmark")?;
    }
    if cli.json {
        out.stdout = json(&BenchReport { seed: cli.seed, rows })?;
    } else {
        writeln!(out.stdout, "{:>3} {:>12} {:>12} {:>12} {:>12} {:>6}", "n", "conv_ms", "count_ms", "solve_ms", "dp_ms", "agree")?;
        for r in &rows {
            writeln!(
                out.stdout,
                "{:>3} {:>12.2} {:>12.2} {:>12.2} {:>12.2} {:>6}",
                r.n, r.convolution_ms, r.partition_count_ms, r.solve_exact_ms, r.bellman_ms, r.agree
            )?;
        }
    }
    Ok(out)
}
