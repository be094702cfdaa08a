//! Command-line front door for the exact-arithmetic library: parse inputs,
//! run the requested verification, emit machine-readable reports.
//!
//! Every rational that reaches a report is rendered exactly (`p/q`, or the
//! bare integer when the denominator is one). Exit codes separate three
//! situations: 0 means every check ran and the results are consistent
//! (including a non-unitarity refutation exactly where the classification
//! predicts one), 1 means a computation contradicted a predicted property
//! (the report carries the witness), and 2 means the input was invalid.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use voaform::affine::AffineModule;
use voaform::combinators::{extension_check, fixed_point_basis, fixed_point_gram, tensor_form};
use voaform::heisenberg::HeisModule;
use voaform::lattice::twisted::TwistedSector;
use voaform::lattice::{EvenLattice, LatticeModule, VLMono, VLVec};
use voaform::rat::{bit_size, display, is_integer, parse_rat};
use voaform::scan::ScanOutcome;
use voaform::virasoro::{classify, discrete_series_point, ClassifyVerdict, ViraModule};
use voaform::{int, psd_check, GaussRat, LinComb, Rat};

/// Hard ceiling on the ceiling itself, so a typo cannot request an
/// astronomically deep scan.
const DEFAULT_CEILING: u64 = 10;

#[derive(Parser, Debug)]
#[command(
    name = "voaform",
    version,
    about = "Exact graded Gram matrices, definiteness verdicts and operator-identity checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format for the report.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub output: OutputFormat,
    /// Largest admissible --maxN.
    #[arg(long, global = true, default_value_t = DEFAULT_CEILING)]
    pub ceiling: u64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Level-by-level definiteness scan of a highest-weight module with
    /// central charge --c and weight --h.
    VirasoroScan {
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        #[arg(long, allow_hyphen_values = true)]
        h: String,
        #[arg(long = "maxN")]
        max_n: u64,
    },
    /// Closed-form unitarity prediction for (--c, --h) without scanning.
    VirasoroClassify {
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        #[arg(long, allow_hyphen_values = true)]
        h: String,
    },
    /// Free-boson Fock module scan for a given rank and one-point spectrum
    /// --lambda (comma-separated rationals, zero when omitted).
    HeisScan {
        #[arg(long)]
        rank: usize,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        #[arg(long = "maxN")]
        max_n: u64,
    },
    /// Vacuum module scan for the affine rank-one algebra at level --k.
    AffineScan {
        #[arg(long, allow_hyphen_values = true)]
        k: String,
        #[arg(long = "maxN")]
        max_n: u64,
    },
    /// Gram scan plus adjoint/invariance/involution identities for the
    /// algebra of an even lattice read from --file (optionally a coset
    /// module selected by --rep).
    LatticeVerify {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        rep: Option<String>,
        #[arg(long = "maxN")]
        max_n: u64,
    },
    /// Twisted-sector scan and identity checks for the rank-one lattice
    /// with Gram entry --g and character --chi (one of 1, -1, i, -i).
    TwistedVerify {
        #[arg(long, allow_hyphen_values = true)]
        g: i64,
        #[arg(long, allow_hyphen_values = true)]
        chi: String,
        #[arg(long = "maxN")]
        max_n: u64,
    },
    /// Compare the glued algebra-plus-module operator blocks against the
    /// rank-one overlattice, through weight --maxN (at least 4).
    ExtensionCheck {
        #[arg(long = "maxN")]
        max_n: u64,
    },
    /// Assemble the rank-two boson Gram from two rank-one factors and
    /// compare entrywise.
    TensorCheck {
        #[arg(long = "maxN")]
        max_n: u64,
    },
    /// Fixed-point subalgebra of the rank-one lattice algebra under the
    /// mode-negating involution: restricted Gram and definiteness.
    OrbifoldCheck {
        #[arg(long = "maxN")]
        max_n: u64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

/// One graded level of a scan.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct LevelLine {
    pub level: String,
    pub dim: usize,
    pub det: String,
    pub verdict: String,
    pub radical_dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_value: Option<String>,
}

/// One aggregated identity check.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct IdentityLine {
    pub name: String,
    pub anchor: String,
    pub window: String,
    pub pass: bool,
}

/// The machine-readable result of one command invocation. Identical
/// configurations produce identical reports except for `wall_time_ms`.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub command: String,
    pub levels: Vec<LevelLine>,
    pub identities: Vec<IdentityLine>,
    pub notes: Vec<String>,
    pub overall: String,
    pub wall_time_ms: u64,
}

pub struct RunOutput {
    pub report: Report,
    pub exit_code: i32,
    /// Largest numerator/denominator bit size that entered the report.
    pub max_bits: u64,
}

/// Tracks the largest rational serialized into a report, for the
/// VOAFORM_MAX_BITS safety valve.
#[derive(Default)]
struct BitTracker {
    max: u64,
}

impl BitTracker {
    fn rat(&mut self, r: &Rat) -> String {
        self.max = self.max.max(bit_size(r));
        display(r)
    }
}

fn parse_rat_arg(name: &str, text: &str) -> Result<Rat, String> {
    parse_rat(text).map_err(|_| {
        format!("--{name}: `{text}` is not a rational; write p/q or an integer (no decimals)")
    })
}

fn parse_rat_list(name: &str, text: &str) -> Result<Vec<Rat>, String> {
    text.split(',')
        .map(|piece| parse_rat_arg(name, piece.trim()))
        .collect()
}

/// Lattice file format: first token is the rank r, followed by r*r integer
/// entries of the Gram matrix in row-major order. Whitespace (including
/// newlines) separates tokens; `#` starts a comment until end of line.
pub fn parse_lattice_text(text: &str) -> Result<Vec<Vec<i64>>, String> {
    let mut tokens = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("");
        tokens.extend(line.split_whitespace());
    }
    let mut it = tokens.into_iter();
    let rank: usize = it
        .next()
        .ok_or("lattice file is empty")?
        .parse()
        .map_err(|_| "lattice file: the first token must be the rank".to_string())?;
    if rank == 0 {
        return Err("lattice file: rank must be at least 1".into());
    }
    let mut rows = Vec::with_capacity(rank);
    for i in 0..rank {
        let mut row = Vec::with_capacity(rank);
        for j in 0..rank {
            let tok = it
                .next()
                .ok_or_else(|| format!("lattice file: missing entry ({i},{j})"))?;
            let v: i64 = tok
                .parse()
                .map_err(|_| format!("lattice file: `{tok}` is not an integer"))?;
            row.push(v);
        }
        rows.push(row);
    }
    if it.next().is_some() {
        return Err("lattice file: trailing tokens after the Gram matrix".into());
    }
    Ok(rows)
}

fn validate_max_n(max_n: u64, ceiling: u64) -> Result<(), String> {
    if max_n < 1 || max_n > ceiling {
        return Err(format!(
            "--maxN must be between 1 and {ceiling} (got {max_n})"
        ));
    }
    Ok(())
}

/// A refutation contradicts the run only when the closed-form prediction
/// said unitary; a refutation where non-unitarity is predicted is the
/// expected finding, and an unrefuted finite window never contradicts a
/// non-unitarity prediction.
pub fn scan_exit_code(predicted_unitary: bool, refuted: bool) -> i32 {
    if refuted && predicted_unitary {
        1
    } else {
        0
    }
}

fn scan_overall(scan: &ScanOutcome, predicted_unitary: bool, max_n: u64) -> String {
    match scan.refuted() {
        Some(rec) => {
            let suffix = if predicted_unitary {
                "contradiction"
            } else {
                "predicted"
            };
            format!("refuted-at-{}-{}", display(&rec.level), suffix)
        }
        None => {
            if scan.radical_total() > 0 {
                format!("positive-semidefinite-through-{max_n}")
            } else {
                format!("positive-definite-through-{max_n}")
            }
        }
    }
}

fn level_lines(bits: &mut BitTracker, scan: &ScanOutcome) -> Vec<LevelLine> {
    scan.levels
        .iter()
        .map(|rec| LevelLine {
            level: bits.rat(&rec.level),
            dim: rec.dim,
            det: bits.rat(&rec.det),
            verdict: rec.report.verdict.as_str().to_string(),
            radical_dim: rec.report.radical_dim,
            witness_value: rec.report.witness.as_ref().map(|(_, v)| bits.rat(v)),
        })
        .collect()
}

pub fn run(cli: &Cli) -> Result<RunOutput, String> {
    let started = std::time::Instant::now();
    let mut bits = BitTracker::default();
    let (command, levels, identities, notes, overall, exit_code) = match &cli.command {
        Command::VirasoroScan { c, h, max_n } => {
            run_virasoro_scan(&mut bits, c, h, *max_n, cli.ceiling)?
        }
        Command::VirasoroClassify { c, h } => run_virasoro_classify(&mut bits, c, h)?,
        Command::HeisScan {
            rank,
            lambda,
            max_n,
        } => run_heis_scan(&mut bits, *rank, lambda.as_deref(), *max_n, cli.ceiling)?,
        Command::AffineScan { k, max_n } => run_affine_scan(&mut bits, k, *max_n, cli.ceiling)?,
        Command::LatticeVerify { file, rep, max_n } => {
            run_lattice_verify(&mut bits, file, rep.as_deref(), *max_n, cli.ceiling)?
        }
        Command::TwistedVerify { g, chi, max_n } => {
            run_twisted_verify(&mut bits, *g, chi, *max_n, cli.ceiling)?
        }
        Command::ExtensionCheck { max_n } => run_extension_check(&mut bits, *max_n, cli.ceiling)?,
        Command::TensorCheck { max_n } => run_tensor_check(&mut bits, *max_n, cli.ceiling)?,
        Command::OrbifoldCheck { max_n } => run_orbifold_check(&mut bits, *max_n, cli.ceiling)?,
    };
    let report = Report {
        command,
        levels,
        identities,
        notes,
        overall,
        wall_time_ms: started.elapsed().as_millis() as u64,
    };
    Ok(RunOutput {
        report,
        exit_code,
        max_bits: bits.max,
    })
}

type CommandResult = Result<
    (
        String,
        Vec<LevelLine>,
        Vec<IdentityLine>,
        Vec<String>,
        String,
        i32,
    ),
    String,
>;

fn run_virasoro_scan(
    bits: &mut BitTracker,
    c_text: &str,
    h_text: &str,
    max_n: u64,
    ceiling: u64,
) -> CommandResult {
    validate_max_n(max_n, ceiling)?;
    let c = parse_rat_arg("c", c_text)?;
    let h = parse_rat_arg("h", h_text)?;
    let module = ViraModule::verma(c.clone(), h.clone());
    let scan = module.unitarity_scan(max_n);
    let predicted = classify(&c, &h) == ClassifyVerdict::PredictUnitary;
    let mut notes = vec![format!(
        "classification: {}",
        if predicted {
            "predict-unitary"
        } else {
            "predict-nonunitary"
        }
    )];
    if let Some((m, r, s)) = discrete_series_point(&c, &h) {
        notes.push(format!("discrete-series m={m} r={r} s={s}"));
    }
    let overall = scan_overall(&scan, predicted, max_n);
    let exit = scan_exit_code(predicted, scan.refuted().is_some());
    Ok((
        format!(
            "virasoro-scan --c {} --h {} --maxN {max_n}",
            display(&c),
            display(&h)
        ),
        level_lines(bits, &scan),
        Vec::new(),
        notes,
        overall,
        exit,
    ))
}

fn run_virasoro_classify(bits: &mut BitTracker, c_text: &str, h_text: &str) -> CommandResult {
    let c = parse_rat_arg("c", c_text)?;
    let h = parse_rat_arg("h", h_text)?;
    let predicted = classify(&c, &h) == ClassifyVerdict::PredictUnitary;
    let mut notes = Vec::new();
    if let Some((m, r, s)) = discrete_series_point(&c, &h) {
        notes.push(format!("discrete-series m={m} r={r} s={s}"));
    }
    bits.max = bits.max.max(bit_size(&c)).max(bit_size(&h));
    Ok((
        format!(
            "virasoro-classify --c {} --h {}",
            display(&c),
            display(&h)
        ),
        Vec::new(),
        Vec::new(),
        notes,
        if predicted {
            "predict-unitary".to_string()
        } else {
            "predict-nonunitary".to_string()
        },
        0,
    ))
}

fn run_heis_scan(
    bits: &mut BitTracker,
    rank: usize,
    lambda_text: Option<&str>,
    max_n: u64,
    ceiling: u64,
) -> CommandResult {
    validate_max_n(max_n, ceiling)?;
    if rank == 0 {
        return Err("--rank must be at least 1".into());
    }
    let lambda = match lambda_text {
        Some(text) => {
            let l = parse_rat_list("lambda", text)?;
            if l.len() != rank {
                return Err(format!(
                    "--lambda needs exactly {rank} comma-separated entries (got {})",
                    l.len()
                ));
            }
            l
        }
        None => vec![int(0); rank],
    };
    let lambda_echo: Vec<String> = lambda.iter().map(display).collect();
    let module = HeisModule::new(rank, lambda.clone());
    let scan = module.unitarity_scan(max_n);
    // The quadratic-mode self-check is quadratic in the window dimension;
    // three levels already exercise every bracket shape.
    let conformal_window = max_n.min(3);
    let identities = vec![IdentityLine {
        name: "virasoro.quadratic-modes".into(),
        anchor: "heis.conformal".into(),
        window: conformal_window.to_string(),
        pass: module.conformal_vector_check(conformal_window),
    }];
    let lambda_nonneg = lambda.iter().all(|x| *x >= int(0));
    let notes = vec![
        "the graded form does not depend on lambda".to_string(),
        format!("side-condition-lambda-nonnegative: {lambda_nonneg}"),
        format!("central-charge: {rank}"),
    ];
    let refuted = scan.refuted().is_some();
    let identities_pass = identities.iter().all(|i| i.pass);
    let overall = scan_overall(&scan, true, max_n);
    Ok((
        format!(
            "heis-scan --rank {rank} --lambda {} --maxN {max_n}",
            lambda_echo.join(",")
        ),
        level_lines(bits, &scan),
        identities,
        notes,
        overall,
        if refuted || !identities_pass { 1 } else { 0 },
    ))
}

fn run_affine_scan(bits: &mut BitTracker, k_text: &str, max_n: u64, ceiling: u64) -> CommandResult {
    validate_max_n(max_n, ceiling)?;
    let k = parse_rat_arg("k", k_text)?;
    if k == int(-2) {
        return Err("--k: the critical level -2 is excluded".into());
    }
    let admissible = is_integer(&k) && k >= int(0);
    let module = AffineModule::sl2_vacuum(k.clone());
    let scan = module.unitarity_scan(max_n);
    let notes = vec![format!("admissible-level: {admissible}")];
    let overall = scan_overall(&scan, admissible, max_n);
    let exit = scan_exit_code(admissible, scan.refuted().is_some());
    Ok((
        format!("affine-scan --k {} --maxN {max_n}", display(&k)),
        level_lines(bits, &scan),
        Vec::new(),
        notes,
        overall,
        exit,
    ))
}

fn single(mono: &VLMono) -> VLVec {
    LinComb::single(mono.clone(), int(1))
}

/// Basis monomials of every nonempty graded piece of weight <= max.
fn lattice_basis_through(m: &LatticeModule, max: &Rat) -> Vec<VLMono> {
    let mut out = Vec::new();
    for w in m.weights_up_to(max) {
        out.extend(m.basis(&w));
    }
    out
}

fn lattice_identity_block(
    voa: &LatticeModule,
    target: &LatticeModule,
    rank: usize,
    max_n: u64,
) -> Vec<IdentityLine> {
    let window = int(max_n as i64);
    let basis = lattice_basis_through(target, &window);
    let vectors: Vec<VLVec> = basis.iter().map(single).collect();
    let mut identities = Vec::new();

    // Involution: squares to the identity and preserves the form.
    let mut theta_pass = true;
    for (i, u) in vectors.iter().enumerate() {
        if target.theta(&target.theta(u)) != *u {
            theta_pass = false;
        }
        for v in vectors.iter().skip(i) {
            if target.pair(&target.theta(u), &target.theta(v)) != target.pair(u, v) {
                theta_pass = false;
            }
        }
    }
    identities.push(IdentityLine {
        name: "theta.involution-isometry".into(),
        anchor: "map.involution".into(),
        window: max_n.to_string(),
        pass: theta_pass,
    });

    // Group-element and label adjoints for the generating directions.
    for gen in 0..rank {
        for sign in [1i64, -1] {
            let mut alpha = vec![0i64; rank];
            alpha[gen] = sign;
            identities.push(IdentityLine {
                name: format!("adjoint.group[{}e{}]", if sign > 0 { "+" } else { "-" }, gen),
                anchor: "form.adjoint.group".into(),
                window: max_n.to_string(),
                pass: target.adjoint_check(&alpha, &window),
            });
        }
    }

    // Invariance of the form for the generating fields, on all basis pairs.
    let mut generators: Vec<(String, VLVec)> = Vec::new();
    for gen in 0..rank {
        generators.push((
            format!("invariance.oscillator[{gen}]"),
            voa.apply_basis_mode(gen, -1, &voa.ground()),
        ));
        for sign in [1i64, -1] {
            let mut alpha = vec![0i64; rank];
            alpha[gen] = sign;
            generators.push((
                format!("invariance.group[{}e{}]", if sign > 0 { "+" } else { "-" }, gen),
                voa.e_alpha(&alpha, &voa.ground()),
            ));
        }
    }
    for (name, a) in generators {
        let mut pass = true;
        for w1 in &vectors {
            for w2 in &vectors {
                if !target.invariance_check(&a, w1, w2, &window) {
                    pass = false;
                }
            }
        }
        identities.push(IdentityLine {
            name,
            anchor: "form.invariance.untwisted".into(),
            window: max_n.to_string(),
            pass,
        });
    }
    identities
}

fn run_lattice_verify(
    bits: &mut BitTracker,
    file: &PathBuf,
    rep_text: Option<&str>,
    max_n: u64,
    ceiling: u64,
) -> CommandResult {
    validate_max_n(max_n, ceiling)?;
    let text = std::fs::read_to_string(file)
        .map_err(|e| format!("cannot read {}: {e}", file.display()))?;
    let rows = parse_lattice_text(&text)?;
    let rank = rows.len();
    let lattice = EvenLattice::new(rows).map_err(|e| format!("invalid lattice: {e}"))?;
    let rep = match rep_text {
        Some(text) => {
            let r = parse_rat_list("rep", text)?;
            if r.len() != rank {
                return Err(format!(
                    "--rep needs exactly {rank} comma-separated entries (got {})",
                    r.len()
                ));
            }
            Some(r)
        }
        None => None,
    };
    let voa = LatticeModule::voa(lattice.clone());
    let target = match &rep {
        Some(r) => LatticeModule::module(lattice, r.clone())
            .map_err(|e| format!("invalid --rep: {e}"))?,
        None => voa.clone(),
    };
    let scan = target.unitarity_scan(&int(max_n as i64));
    let identities = lattice_identity_block(&voa, &target, rank, max_n);
    let refuted = scan.refuted().is_some();
    let identities_pass = identities.iter().all(|i| i.pass);
    let overall = if refuted || !identities_pass {
        "fail".to_string()
    } else {
        "pass".to_string()
    };
    let rep_echo = match &rep {
        Some(r) => format!(
            " --rep {}",
            r.iter().map(display).collect::<Vec<_>>().join(",")
        ),
        None => String::new(),
    };
    Ok((
        format!(
            "lattice-verify --file {}{rep_echo} --maxN {max_n}",
            file.display()
        ),
        level_lines(bits, &scan),
        identities,
        vec![format!("rank: {rank}")],
        overall,
        if refuted || !identities_pass { 1 } else { 0 },
    ))
}

fn parse_chi(g: i64, token: &str) -> Result<GaussRat, String> {
    let value = match token {
        "1" => GaussRat::from_int(1),
        "-1" => GaussRat::from_int(-1),
        "i" => GaussRat::i(),
        "-i" => GaussRat::new(int(0), int(-1)),
        other => {
            return Err(format!(
                "--chi: `{other}` is not one of 1, -1, i, -i"
            ))
        }
    };
    let admissible = TwistedSector::admissible_characters(g);
    if !admissible.contains(&value) {
        let names: Vec<&str> = admissible
            .iter()
            .map(|c| gauss_token(c))
            .collect();
        return Err(format!(
            "--chi: {token} is not admissible for g={g}; admissible values: {}",
            names.join(", ")
        ));
    }
    Ok(value)
}

fn gauss_token(c: &GaussRat) -> &'static str {
    if *c == GaussRat::from_int(1) {
        "1"
    } else if *c == GaussRat::from_int(-1) {
        "-1"
    } else if *c == GaussRat::i() {
        "i"
    } else {
        "-i"
    }
}

fn run_twisted_verify(
    bits: &mut BitTracker,
    g: i64,
    chi_text: &str,
    max_n: u64,
    ceiling: u64,
) -> CommandResult {
    validate_max_n(max_n, ceiling)?;
    if g <= 0 || g % 2 != 0 {
        return Err(format!("--g must be a positive even integer (got {g})"));
    }
    let chi = parse_chi(g, chi_text)?;
    let sector = TwistedSector::new(g, chi).map_err(|e| format!("invalid sector: {e}"))?;
    let max_doubled = 2 * max_n;
    let scan = sector.unitarity_scan(max_doubled);

    let mut identities = Vec::new();
    for m in [1i64, -1, 2] {
        identities.push(IdentityLine {
            name: format!("adjoint.group[m={m}]"),
            anchor: "form.adjoint.twisted".into(),
            window: display(&voaform::rat(max_doubled as i64, 2)),
            pass: sector.group_adjoint_check(m, max_doubled),
        });
    }
    let voa = LatticeModule::voa(EvenLattice::new(vec![vec![g]]).unwrap());
    let window = int(max_n as i64);
    let mut basis = Vec::new();
    for doubled in 0..=max_doubled {
        basis.extend(sector.basis(doubled));
    }
    let vectors: Vec<_> = basis
        .iter()
        .map(|m| LinComb::single(m.clone(), GaussRat::from_int(1)))
        .collect();
    let mut generators = vec![("invariance.oscillator".to_string(), {
        voa.apply_basis_mode(0, -1, &voa.ground())
    })];
    for sign in [1i64, -1] {
        generators.push((
            format!("invariance.group[{}e0]", if sign > 0 { "+" } else { "-" }),
            voa.e_alpha(&[sign], &voa.ground()),
        ));
    }
    for (name, a) in generators {
        let mut pass = true;
        for u in &vectors {
            for v in &vectors {
                if !sector.invariance_check(&voa, &a, u, v, &window) {
                    pass = false;
                }
            }
        }
        identities.push(IdentityLine {
            name,
            anchor: "form.invariance.twisted".into(),
            window: max_n.to_string(),
            pass,
        });
    }

    let admissible: Vec<&str> = TwistedSector::admissible_characters(g)
        .iter()
        .map(gauss_token)
        .collect();
    let notes = vec![
        format!("admissible-characters: {}", admissible.join(", ")),
        format!("chosen-character: {}", gauss_token(sector.chi())),
        "ground-state-weight: 1/16".to_string(),
    ];
    let refuted = scan.refuted().is_some();
    let identities_pass = identities.iter().all(|i| i.pass);
    Ok((
        format!("twisted-verify --g {g} --chi {chi_text} --maxN {max_n}"),
        level_lines(bits, &scan),
        identities,
        notes,
        if refuted || !identities_pass {
            "fail".to_string()
        } else {
            "pass".to_string()
        },
        if refuted || !identities_pass { 1 } else { 0 },
    ))
}

fn run_extension_check(bits: &mut BitTracker, max_n: u64, ceiling: u64) -> CommandResult {
    validate_max_n(max_n, ceiling)?;
    if max_n < 4 {
        return Err(
            "--maxN must be at least 4: the module-module block first appears at weight 4".into(),
        );
    }
    let report = extension_check(&int(max_n as i64));
    let identities = vec![
        IdentityLine {
            name: "extension.blocks".into(),
            anchor: "ext.blocks".into(),
            window: max_n.to_string(),
            pass: report.blocks_match,
        },
        IdentityLine {
            name: "extension.skew-symmetry".into(),
            anchor: "ext.skew".into(),
            window: "3".into(),
            pass: report.skew_symmetric,
        },
        IdentityLine {
            name: "extension.embedding-isometry".into(),
            anchor: "ext.isometry".into(),
            window: max_n.to_string(),
            pass: report.iota_isometric,
        },
    ];
    let scalar_note = match &report.mm_scalar {
        Some(s) => format!("module-module-scalar: {}", bits.rat(s)),
        None => "module-module-scalar: none".to_string(),
    };
    let consistent = report.consistent();
    Ok((
        format!("extension-check --maxN {max_n}"),
        Vec::new(),
        identities,
        vec![scalar_note],
        if consistent {
            "pass".to_string()
        } else {
            "fail".to_string()
        },
        if consistent { 0 } else { 1 },
    ))
}

fn run_tensor_check(bits: &mut BitTracker, max_n: u64, ceiling: u64) -> CommandResult {
    validate_max_n(max_n, ceiling)?;
    let one = HeisModule::vacuum(1);
    let two = HeisModule::vacuum(2);
    let factor: Vec<_> = (0..=max_n).map(|k| one.gram(k)).collect();
    let mut levels = Vec::new();
    let mut structural = true;
    for total in 0..=max_n {
        let assembled = tensor_form(&[factor.clone(), factor.clone()], total);
        if assembled != two.gram(total) {
            structural = false;
        }
        let report = psd_check(&assembled);
        levels.push(LevelLine {
            level: total.to_string(),
            dim: assembled.n(),
            det: bits.rat(&assembled.det()),
            verdict: report.verdict.as_str().to_string(),
            radical_dim: report.radical_dim,
            witness_value: report.witness.as_ref().map(|(_, v)| bits.rat(v)),
        });
    }
    let all_pd = levels.iter().all(|l| l.verdict == "positive-definite");
    let identities = vec![IdentityLine {
        name: "tensor.block-structure".into(),
        anchor: "form.tensor.blocks".into(),
        window: max_n.to_string(),
        pass: structural,
    }];
    let pass = structural && all_pd;
    Ok((
        format!("tensor-check --maxN {max_n}"),
        levels,
        identities,
        vec!["factors: two rank-1 boson modules; reference: the rank-2 boson module".to_string()],
        if pass { "pass".to_string() } else { "fail".to_string() },
        if pass { 0 } else { 1 },
    ))
}

fn run_orbifold_check(bits: &mut BitTracker, max_n: u64, ceiling: u64) -> CommandResult {
    validate_max_n(max_n, ceiling)?;
    let voa = LatticeModule::voa(EvenLattice::new(vec![vec![2]]).unwrap());
    let mut levels = Vec::new();
    let mut restriction = true;
    let mut fixedness = true;
    for w in 0..=max_n {
        let weight = int(w as i64);
        let basis = fixed_point_basis(&voa, &weight);
        let gram = fixed_point_gram(&voa, &weight);
        for (i, u) in basis.iter().enumerate() {
            if voa.theta(u) != *u {
                fixedness = false;
            }
            for (j, v) in basis.iter().enumerate() {
                if gram.at(i, j) != &voa.pair(u, v) {
                    restriction = false;
                }
            }
        }
        let report = psd_check(&gram);
        levels.push(LevelLine {
            level: w.to_string(),
            dim: gram.n(),
            det: bits.rat(&gram.det()),
            verdict: report.verdict.as_str().to_string(),
            radical_dim: report.radical_dim,
            witness_value: report.witness.as_ref().map(|(_, v)| bits.rat(v)),
        });
    }
    let all_pd = levels.iter().all(|l| l.verdict == "positive-definite");
    let identities = vec![
        IdentityLine {
            name: "restriction.matches-ambient".into(),
            anchor: "form.restriction".into(),
            window: max_n.to_string(),
            pass: restriction,
        },
        IdentityLine {
            name: "theta.fixes-basis".into(),
            anchor: "map.fixed-points".into(),
            window: max_n.to_string(),
            pass: fixedness,
        },
    ];
    let pass = restriction && fixedness && all_pd;
    Ok((
        format!("orbifold-check --maxN {max_n}"),
        levels,
        identities,
        vec!["ambient: rank-1 lattice algebra with Gram entry 2".to_string()],
        if pass { "pass".to_string() } else { "fail".to_string() },
        if pass { 0 } else { 1 },
    ))
}

pub fn render(report: &Report, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => serde_json::to_string_pretty(report).expect("report serializes"),
        OutputFormat::Csv => render_csv(report),
        OutputFormat::Text => render_text(report),
    }
}

fn render_csv(report: &Report) -> String {
    let mut out = String::new();
    out.push_str("level,dim,det,verdict,radical_dim,witness_value\n");
    for l in &report.levels {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            l.level,
            l.dim,
            l.det,
            l.verdict,
            l.radical_dim,
            l.witness_value.as_deref().unwrap_or("")
        ));
    }
    out.push('\n');
    out.push_str("name,anchor,window,pass\n");
    for i in &report.identities {
        out.push_str(&format!("{},{},{},{}\n", i.name, i.anchor, i.window, i.pass));
    }
    out.push('\n');
    out.push_str(&format!("overall,{}\n", report.overall));
    out
}

fn render_text(report: &Report) -> String {
    let mut out = String::new();
    out.push_str(&format!("command: {}\n", report.command));
    for l in &report.levels {
        out.push_str(&format!(
            "level {}: dim {}, det {}, {}, radical {}",
            l.level, l.dim, l.det, l.verdict, l.radical_dim
        ));
        if let Some(w) = &l.witness_value {
            out.push_str(&format!(", witness {w}"));
        }
        out.push('\n');
    }
    for i in &report.identities {
        out.push_str(&format!(
            "identity {} [{}] window {}: {}\n",
            i.name,
            i.anchor,
            i.window,
            if i.pass { "pass" } else { "FAIL" }
        ));
    }
    for n in &report.notes {
        out.push_str(&format!("note: {n}\n"));
    }
    out.push_str(&format!("overall: {}\n", report.overall));
    out.push_str(&format!("wall-time: {} ms\n", report.wall_time_ms));
    out
}

/// The VOAFORM_MAX_BITS safety valve: when the variable is set, any report
/// containing a rational wider than the cap aborts the run with exit 2.
pub fn bit_cap_violation(max_bits: u64) -> Result<Option<String>, String> {
    match std::env::var("VOAFORM_MAX_BITS") {
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(format!("VOAFORM_MAX_BITS: {e}")),
        Ok(text) => {
            let cap: u64 = text
                .parse()
                .map_err(|_| format!("VOAFORM_MAX_BITS: `{text}` is not an integer"))?;
            if max_bits > cap {
                Ok(Some(format!(
                    "arithmetic exceeded VOAFORM_MAX_BITS={cap}: a report entry needs {max_bits} bits"
                )))
            } else {
                Ok(None)
            }
        }
    }
}
