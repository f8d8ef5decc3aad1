use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use biserial::circular::{
    build_m0, count_points_with_budget, degeneration_path, dim_comp, rank_sequence_of, CycleShape, RankSeq,
};
use biserial::field::{format_rational, rat};
use biserial::krull_schmidt::{decompose_with, is_isomorphic, SplitOptions};
use biserial::linalg::{derive_seed, QMatrix};
use biserial::quiver::{
    catalog, check_complete_gentle, check_gentle, check_special_biserial, complete_gentle_closure,
    is_finite_dimensional, BoundQuiver, DimVector, Weight,
};
use biserial::repvar::json::{from_json, to_json, AnyRepresentation};
use biserial::repvar::{components, dim_component, sample_generic, ComponentDescriptor, GentleAlgebra, QRep, RankSequence};
use biserial::stability::{check_stability, check_stability_fp, moduli_structure, ModuliOutcome};
use biserial::strings_bands::WordCatalog;
use biserial::text::{parse_quiver, print_quiver, QuiverFile};
use biserial::Error;
use serde_json::{json, Value};

use crate::args::{Cli, Command, JobConfig};
use crate::CliError;

/// Output of one command in both formats.
pub struct Report {
    pub text: String,
    pub json: Value,
}

type Assignments = [(String, i64)];

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let cfg = JobConfig::from_opts(&cli.global);
    match &cli.command {
        Command::Validate { file } => validate(&load(file)?.bound),
        Command::Complete { file } => complete(&load(file)?.bound),
        Command::Cycles { file } => cycles(&load(file)?.bound),
        Command::Components { file, dim } => {
            let f = load(file)?;
            let d = dim_vector(&f, dim)?;
            list_components(&f.bound, &d)
        }
        Command::Dim { n, r } => dim(n, r),
        Command::Decompose { file, dim, rank } => {
            let f = load(file)?;
            let d = dim_vector(&f, dim)?;
            decompose_components(&f.bound, &d, rank, &cfg)
        }
        Command::Stability { file, module, theta } => {
            let f = load(file)?;
            let t = weight(&f, theta)?;
            stability(&f.bound, module, &t, &cfg)
        }
        Command::Moduli { file, dim, theta } => {
            let f = load(file)?;
            let d = dim_vector(&f, dim)?;
            let t = weight(&f, theta)?;
            moduli(&f.bound, &d, &t, &cfg)
        }
        Command::CountPoints { n, r, q } => count(n, r, q, &cfg),
        Command::Degenerate { n, r, to } => degenerate(n, r, to, &cfg),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load(path: &Path) -> Result<QuiverFile, CliError> {
    Ok(parse_quiver(&read(path)?)?)
}

fn dim_vector(file: &QuiverFile, given: &Assignments) -> Result<DimVector, CliError> {
    if given.is_empty() {
        return file
            .dim
            .clone()
            .ok_or_else(|| CliError::Usage("no --dim given and the quiver file has no dim line".into()));
    }
    Ok(DimVector::from_assignments(file.bound.quiver(), given)?)
}

fn weight(file: &QuiverFile, given: &Assignments) -> Result<Weight, CliError> {
    if given.is_empty() {
        return file
            .theta
            .clone()
            .ok_or_else(|| CliError::Usage("no --theta given and the quiver file has no theta line".into()));
    }
    Ok(Weight::from_assignments(file.bound.quiver(), given)?)
}

fn shape(n: &[usize]) -> Result<CycleShape, CliError> {
    Ok(CycleShape::new(n.to_vec())?)
}

fn validate(bq: &BoundQuiver) -> Result<Report, CliError> {
    let q = bq.quiver();
    let sb = match check_special_biserial(bq) {
        Ok(v) => v.to_string(),
        Err(e) => format!("no ({e})"),
    };
    let gentle = check_gentle(bq).to_string();
    let complete = check_complete_gentle(bq).to_string();
    let finite = match is_finite_dimensional(bq) {
        Some(true) => "yes",
        Some(false) => "no",
        None => "unknown",
    };
    let text = format!(
        "quiver {}: {} vertices, {} arrows, {} relations\n\
         special biserial: {sb}; gentle: {gentle}; complete gentle: {complete}\n\
         finite dimensional: {finite}\n",
        bq.name(),
        q.num_vertices(),
        q.num_arrows(),
        bq.relations().len(),
    );
    let json = json!({
        "quiver": bq.name(),
        "vertices": q.num_vertices(),
        "arrows": q.num_arrows(),
        "relations": bq.relations().len(),
        "special_biserial": sb,
        "gentle": gentle,
        "complete_gentle": complete,
        "finite_dimensional": finite,
    });
    Ok(Report { text, json })
}

fn complete(bq: &BoundQuiver) -> Result<Report, CliError> {
    let c = complete_gentle_closure(bq)?;
    let text = print_quiver(&QuiverFile::new(c.bound.clone()));
    let q = c.bound.quiver();
    let added: Vec<&str> = c.added.iter().map(|&a| q.arrow_name(a)).collect();
    let json = json!({ "added": added, "quiver": text });
    Ok(Report { text, json })
}

fn cycles(bq: &BoundQuiver) -> Result<Report, CliError> {
    let algebra = GentleAlgebra::new(bq)?;
    let q = algebra.quiver();
    let rendered: Vec<String> = algebra.cycles().iter().map(|c| c.render(q)).collect();
    let mut text = String::new();
    for (c, r) in algebra.cycles().iter().zip(&rendered) {
        let _ = writeln!(text, "{r}  length {}", c.len());
    }
    Ok(Report { text, json: json!({ "cycles": rendered }) })
}

fn list_components(bq: &BoundQuiver, d: &DimVector) -> Result<Report, CliError> {
    let algebra = Arc::new(GentleAlgebra::new(bq)?);
    let comps = components(&algebra, d)?;
    let mut text = format!("d=({}): {} component(s)\n", d.render(bq.quiver()), comps.len());
    let mut rows = Vec::new();
    for c in &comps {
        let dim = dim_component(c)?;
        let _ = writeln!(text, "{c}  dim {dim}");
        rows.push(json!({ "component": c.ranks().render(algebra.quiver()), "dim": dim }));
    }
    let json = json!({ "d": d.render(bq.quiver()), "components": rows });
    Ok(Report { text, json })
}

fn dim(n: &[usize], r: &[usize]) -> Result<Report, CliError> {
    let d = dim_comp(&shape(n)?, &RankSeq(r.to_vec()))?;
    Ok(Report {
        text: format!("{d}\n"),
        json: json!({ "n": n, "r": r, "dim": d }),
    })
}

fn rank_sequence(algebra: &GentleAlgebra, given: &Assignments) -> Result<RankSequence, CliError> {
    let q = algebra.quiver();
    let mut ranks = vec![0usize; q.num_arrows()];
    for (name, value) in given {
        let a = (0..q.num_arrows())
            .find(|&a| q.arrow_name(a) == name)
            .ok_or_else(|| Error::InvalidInput(format!("unknown arrow '{name}'")))?;
        ranks[a] = usize::try_from(*value).map_err(|_| Error::InvalidInput(format!("negative rank {value}")))?;
    }
    Ok(RankSequence(ranks))
}

fn decompose_components(
    bq: &BoundQuiver,
    d: &DimVector,
    rank: &Assignments,
    cfg: &JobConfig,
) -> Result<Report, CliError> {
    let algebra = Arc::new(GentleAlgebra::new(bq)?);
    let selected: Vec<ComponentDescriptor> = if rank.is_empty() {
        components(&algebra, d)?
    } else {
        vec![ComponentDescriptor::new(algebra.clone(), d.clone(), rank_sequence(&algebra, rank)?)?]
    };
    let catalog = WordCatalog::new(algebra.original().clone(), d.total())?;
    let q = bq.quiver();
    let split = SplitOptions {
        iso_trials: cfg.trials,
        ..SplitOptions::default()
    };
    let mut text = String::new();
    let mut rows = Vec::new();
    for (k, c) in selected.iter().enumerate() {
        let seed = derive_seed(cfg.seed, k as u64);
        let m = algebra.to_original(&sample_generic(c, seed)?)?;
        let parts = decompose_with(&m, seed, &split)?;
        let _ = writeln!(text, "{c}");
        let mut summands = Vec::new();
        for (i, s) in parts.summands.iter().enumerate() {
            let label = match catalog.identify(&s.module, cfg.trials, derive_seed(seed, i as u64)) {
                Ok(id) => id.render(q),
                Err(Error::Unidentified(_)) => "unidentified".to_string(),
                Err(e) => return Err(e.into()),
            };
            let _ = writeln!(text, "  {} x {}  dim {}", s.multiplicity, label, s.module.dim().render(q));
            summands.push(json!({
                "multiplicity": s.multiplicity,
                "residue_degree": s.residue_degree,
                "identification": label,
                "module": to_json(&s.module),
            }));
        }
        rows.push(json!({
            "component": c.ranks().render(algebra.quiver()),
            "summands": summands,
        }));
    }
    Ok(Report {
        text,
        json: json!({ "d": d.render(q), "components": rows }),
    })
}

fn stability(bq: &BoundQuiver, module: &Path, theta: &Weight, cfg: &JobConfig) -> Result<Report, CliError> {
    let value: Value =
        serde_json::from_str(&read(module)?).map_err(|e| Error::Parse(format!("{}: {e}", module.display())))?;
    let bq = Arc::new(bq.clone());
    let verdict = match from_json(bq.clone(), &value)? {
        AnyRepresentation::Rational(m) => check_stability(&m, theta, &cfg.stability)?,
        AnyRepresentation::Modular(m) => check_stability_fp(&m, theta, &cfg.stability.budget)?,
    };
    let q = bq.quiver();
    let primes: Vec<String> = verdict.primes.iter().map(u64::to_string).collect();
    let mut text = format!("{}\n", verdict.render(q));
    if !primes.is_empty() {
        let _ = writeln!(text, "primes: {}", primes.join(","));
    }
    for w in &verdict.warnings {
        let _ = writeln!(text, "warning: {w}");
    }
    Ok(Report { text, json: verdict.to_json(q) })
}

fn moduli(bq: &BoundQuiver, d: &DimVector, theta: &Weight, cfg: &JobConfig) -> Result<Report, CliError> {
    let algebra = Arc::new(GentleAlgebra::new(bq)?);
    let entries = moduli_structure(&algebra, d, theta, cfg.seed, &cfg.decomposition())?;
    let mut text = String::new();
    for e in &entries {
        let _ = writeln!(text, "{}", e.render());
        if let ModuliOutcome::Computed { decomposition, .. } = &e.outcome {
            let _ = writeln!(text, "    generic point: {}", decomposition.render());
            for note in &decomposition.notes {
                let _ = writeln!(text, "    note: {note}");
            }
        }
    }
    let json = json!({
        "d": d.render(bq.quiver()),
        "theta": theta.render(bq.quiver()),
        "components": entries.iter().map(|e| e.to_json()).collect::<Vec<_>>(),
    });
    Ok(Report { text, json })
}

fn count(n: &[usize], r: &[usize], qs: &[u64], cfg: &JobConfig) -> Result<Report, CliError> {
    let s = shape(n)?;
    let r = RankSeq(r.to_vec());
    let mut text = String::new();
    let mut rows = Vec::new();
    for &q in qs {
        let c = count_points_with_budget(&s, &r, q, &cfg.count)?;
        let _ = writeln!(text, "q={q}: {c}");
        rows.push(json!({ "q": q, "count": c }));
    }
    Ok(Report {
        text,
        json: json!({ "n": n, "r": r.0, "counts": rows }),
    })
}

/// Entries that differ between the family at 0 and at 1 are shown as `t`.
fn render_family(at0: &QMatrix, at1: &QMatrix) -> String {
    let rows: Vec<String> = (0..at0.rows())
        .map(|i| {
            (0..at0.cols())
                .map(|j| {
                    let (x, y) = (at0.get(i, j), at1.get(i, j));
                    if x == y {
                        format_rational(x)
                    } else {
                        "t".to_string()
                    }
                })
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect();
    format!("[{}]", rows.join("; "))
}

fn degenerate(n: &[usize], r: &[usize], to: &[usize], cfg: &JobConfig) -> Result<Report, CliError> {
    let s = shape(n)?;
    let (r, to) = (RankSeq(r.to_vec()), RankSeq(to.to_vec()));
    let at0 = degeneration_path(&s, &r, &to, &rat(0))?;
    let at1 = degeneration_path(&s, &r, &to, &rat(1))?;
    let generic = is_isomorphic(
        &QRep::circular(at1.clone())?,
        &QRep::circular(build_m0(&s, &r)?)?,
        cfg.trials,
        cfg.seed,
    )?;
    let special = rank_sequence_of(&at0) == to
        && is_isomorphic(
            &QRep::circular(at0.clone())?,
            &QRep::circular(build_m0(&s, &to)?)?,
            cfg.trials,
            derive_seed(cfg.seed, 1),
        )?;
    let names = catalog::cyclic(s.len());
    let q = names.quiver();
    let yes_no = |b: bool| if b { "yes" } else { "no" };
    let mut text = format!("n={n:?} r={:?} -> r'={:?}\n", r.0, to.0);
    let mut mats = Vec::new();
    for (i, (a, b)) in at0.iter().zip(&at1).enumerate() {
        let m = render_family(a, b);
        let _ = writeln!(text, "{}: {m}", q.arrow_name(i));
        mats.push(json!({ "arrow": q.arrow_name(i), "matrix": m }));
    }
    let _ = writeln!(text, "t != 0 isomorphic to M0(n, r): {}", yes_no(generic));
    let _ = writeln!(text, "t = 0 isomorphic to M0(n, r'): {}", yes_no(special));
    let json = json!({
        "n": n,
        "r": r.0,
        "target": to.0,
        "family": mats,
        "generic_is_m0_r": generic,
        "special_is_m0_target": special,
    });
    Ok(Report { text, json })
}
