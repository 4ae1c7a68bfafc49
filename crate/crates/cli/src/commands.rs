use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use serde_json::{json, Value};
use wdrd_core::search::canonical_form;
use wdrd_core::wdrd::local_classes;
use wdrd_core::{
    are_isomorphic, cayley_cyclic, complete, dgf, folded_johnson, johnson, mu_graph_property,
    search_commutative_wdrd, sweep_neighbourhoods, verify_local_counts, wdrd_report, CayleySpec, Digraph,
    LabeledGraph, Prune, SearchOptions,
};

use crate::{CheckExpect, Command, Format, GenFamily, IsoExpect, Output, PruneArg};

/// Runs one command. `Ok(false)` means an `--expect` condition failed.
pub fn run(command: Command) -> Result<bool> {
    match command {
        Command::Gen { family, labels, output } => gen(family, labels, &output),
        Command::Check { input, expect, local, output } => check(input, expect, local, &output),
        Command::Scheme { input, matrices, output } => scheme(input, matrices, &output),
        Command::Structure { graph, sample, expect_pass, output } => structure(&graph, sample, expect_pass, &output),
        Command::Search { graph, jobs, prune, max_edges, use_reversal, canon_cap, dgf_dir, expect_classes, output } => {
            let opts = SearchOptions {
                jobs,
                prune: match prune {
                    PruneArg::None => Prune::None,
                    PruneArg::DigonCount => Prune::DigonCount,
                },
                max_edges,
                use_reversal,
                canon_cap,
            };
            search(&graph, &opts, dgf_dir, expect_classes, &output)
        }
        Command::Iso { a, b, expect, canon_cap, output } => iso(&a, &b, expect, canon_cap, &output),
    }
}

fn emit(output: &Output, text: &str) -> Result<()> {
    match &output.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

/// Pretty JSON with sorted keys and a trailing newline.
fn emit_json(output: &Output, value: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit(output, &text)
}

fn read_input(input: Option<&Path>) -> Result<Digraph> {
    let (text, name) = match input {
        None => (read_stdin()?, "<stdin>".to_string()),
        Some(p) if p.as_os_str() == "-" => (read_stdin()?, "<stdin>".to_string()),
        Some(p) => (fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?, p.display().to_string()),
    };
    dgf::parse(&text).with_context(|| format!("parsing {name}"))
}

fn read_stdin() -> Result<String> {
    let mut s = String::new();
    io::stdin().read_to_string(&mut s).context("reading standard input")?;
    Ok(s)
}

fn parse_num(s: &str, what: &str) -> Result<usize> {
    s.parse().with_context(|| format!("invalid {what} `{s}`"))
}

/// `johnson N E` or `folded-johnson E`.
fn labeled_spec(spec: &[String]) -> Result<LabeledGraph> {
    let words: Vec<&str> = spec.iter().map(String::as_str).collect();
    let g = match words[..] {
        ["johnson", n, e] => johnson(parse_num(n, "n")?, parse_num(e, "e")?)?,
        ["folded-johnson", e] => folded_johnson(parse_num(e, "e")?)?,
        _ => bail!("expected `johnson N E` or `folded-johnson E`, got `{}`", words.join(" ")),
    };
    Ok(g)
}

fn gen(family: GenFamily, labels: Option<PathBuf>, output: &Output) -> Result<bool> {
    let (graph, labeled) = match family {
        GenFamily::Johnson { n, e } => {
            let g = johnson(n, e)?;
            (g.graph().clone(), Some(g))
        }
        GenFamily::FoldedJohnson { e } => {
            let g = folded_johnson(e)?;
            if g.is_clique_boundary() {
                eprintln!("note: folded J({},{e}) is a complete graph", 2 * e);
            }
            (g.graph().clone(), Some(g))
        }
        GenFamily::Cayley { m, set } => (cayley_cyclic(&CayleySpec::new(m, set)?), None),
        GenFamily::Complete { n } => {
            if n == 0 {
                bail!("a graph needs at least one vertex");
            }
            (complete(n), None)
        }
    };
    if let Some(path) = labels {
        let Some(g) = labeled else {
            bail!("--labels only applies to Johnson families");
        };
        fs::write(&path, g.label_lines()).with_context(|| format!("writing {}", path.display()))?;
    }
    emit(output, &dgf::write(&graph))?;
    Ok(true)
}

fn labels_json<T: ToString>(items: impl IntoIterator<Item = T>) -> Value {
    Value::Array(items.into_iter().map(|t| Value::String(t.to_string())).collect())
}

fn check(input: Option<PathBuf>, expect: Option<CheckExpect>, local: bool, output: &Output) -> Result<bool> {
    let d = read_input(input.as_deref())?;
    let r = wdrd_report(&d);
    let mut v = json!({
        "vertices": d.n(),
        "arcs": d.arc_count(),
        "strongly_connected": r.strongly_connected,
        "non_symmetric": r.non_symmetric,
        "is_wdrd": r.is_wdrd,
        "commutative": r.commutative,
        "type_set": r.type_set,
        "girth": d.girth().ok(),
        "classes": r.scheme().map(|s| labels_json(s.classes())),
        "violation": r.violation().map(|e| json!({"kind": e.kind(), "detail": e.to_string()})),
    });
    if local {
        let counts: Vec<Value> = match r.scheme() {
            Some(s) if r.is_wdrd => local_classes(&d, s)
                .into_iter()
                .map(|h| match verify_local_counts(&d, s, h) {
                    Ok(c) => json!({
                        "class": h.to_string(),
                        "underlying_distance": c.underlying_distance,
                        "sum": c.sum,
                        "expected": c.expected,
                        "holds": c.holds(),
                    }),
                    Err(e) => json!({"class": h.to_string(), "error": e.to_string()}),
                })
                .collect(),
            _ => Vec::new(),
        };
        v["local_counts"] = Value::Array(counts);
    }

    match output.format {
        Format::Json => emit_json(output, &v)?,
        Format::Table => {
            let mut t = String::new();
            writeln!(t, "vertices            {}", d.n())?;
            writeln!(t, "arcs                {}", d.arc_count())?;
            writeln!(t, "strongly connected  {}", r.strongly_connected)?;
            writeln!(t, "WDRD                {}", r.is_wdrd)?;
            writeln!(t, "commutative         {}", r.commutative)?;
            let types: Vec<String> = r.type_set.iter().map(u32::to_string).collect();
            writeln!(t, "type set            {{{}}}", types.join(","))?;
            if let Some(e) = r.violation() {
                writeln!(t, "violation           {e}")?;
            }
            if let Some(Value::Array(counts)) = v.get("local_counts") {
                for c in counts {
                    writeln!(t, "local {c}")?;
                }
            }
            emit(output, &t)?;
        }
    }

    let local_ok = v.get("local_counts").and_then(Value::as_array).map_or(true, |cs| {
        cs.iter().all(|c| c.get("holds").and_then(Value::as_bool) == Some(true))
    });
    let ok = match expect {
        None => true,
        Some(CheckExpect::Wdrd) => r.is_wdrd,
        Some(CheckExpect::CommutativeWdrd) => r.is_commutative_wdrd(),
        Some(CheckExpect::NotWdrd) => !r.is_wdrd,
    };
    if !ok {
        eprintln!("expectation {expect:?} not met");
    }
    Ok(ok && local_ok)
}

fn scheme(input: Option<PathBuf>, matrices: bool, output: &Output) -> Result<bool> {
    let d = read_input(input.as_deref())?;
    let r = wdrd_report(&d);
    if !r.strongly_connected {
        eprintln!("digraph is not strongly connected");
        return Ok(false);
    }
    let Some(s) = r.scheme() else {
        let e = r.violation().expect("a scheme or a violation");
        eprintln!("not an association scheme: {e}");
        return Ok(false);
    };
    let identities = s.check_intersection_identities();
    let mut v = serde_json::to_value(s.table())?;
    v["identities"] = serde_json::to_value(&identities)?;
    v["matrices_commute"] = json!(s.matrices_commute());
    if matrices {
        let ms: Vec<Value> = s
            .classes()
            .iter()
            .map(|&c| {
                let m = s.intersection_matrix(c).expect("known class");
                let rows: Vec<Vec<u64>> = (0..m.size).map(|i| (0..m.size).map(|j| m.get(i, j)).collect()).collect();
                json!({"class": c.to_string(), "rows": rows})
            })
            .collect();
        v["matrices"] = Value::Array(ms);
    }
    match output.format {
        Format::Json => emit_json(output, &v)?,
        Format::Table => {
            let mut t = String::new();
            let c = s.class_count();
            for i in 0..c {
                writeln!(t, "class {:<8} dual {:<8} k = {}", s.classes()[i], s.classes()[s.dual(i)], s.valency(i))?;
            }
            writeln!(t, "commutative {}  symmetric {}  primitive {}", s.is_commutative(), s.is_symmetric(), s.is_primitive())?;
            for l in 0..c {
                writeln!(t, "p^{}:", s.classes()[l])?;
                for i in 0..c {
                    let row: Vec<String> = (0..c).map(|j| format!("{:>3}", s.p(i, j, l))).collect();
                    writeln!(t, "  {:<8}{}", s.classes()[i], row.join(""))?;
                }
            }
            if matrices {
                for &cl in s.classes() {
                    writeln!(t, "B_{cl}:\n{}", s.intersection_matrix(cl).expect("known class"))?;
                }
            }
            emit(output, &t)?;
        }
    }
    Ok(identities.all_pass())
}

fn structure(spec: &[String], sample: Option<usize>, expect_pass: bool, output: &Output) -> Result<bool> {
    let g = labeled_spec(spec)?;
    let start = Instant::now();
    let (checked, failures) = sweep_neighbourhoods(&g, sample)?;
    let count = |f: fn(&wdrd_core::NeighbourhoodReport) -> bool| failures.iter().filter(|r| !f(r)).count();
    let mu = mu_graph_property(g.graph());
    eprintln!("structure checks took {:.2}s", start.elapsed().as_secs_f64());

    let neighbourhood_ok = failures.is_empty();
    let mu_ok = matches!(&mu, Ok(r) if r.pass);
    let v = json!({
        "graph": g.name(),
        "vertices": g.graph().n(),
        "edges_checked": checked,
        "neighbourhood": {
            "partition_and_distances_failures": count(|r| r.partition_and_distances.ok),
            "swap_symmetric_failures": count(|r| r.swap_symmetric.ok),
            "exchange_failures": count(|r| r.exchange.ok),
            "first_failure": failures.first(),
            "pass": neighbourhood_ok,
        },
        "mu_graph": match &mu {
            Ok(r) => serde_json::to_value(r)?,
            Err(e) => json!({"error": e.to_string()}),
        },
    });
    match output.format {
        Format::Json => emit_json(output, &v)?,
        Format::Table => {
            let mut t = String::new();
            writeln!(t, "{} ({} vertices), {} edges checked", g.name(), g.graph().n(), checked)?;
            writeln!(t, "neighbourhood partition and distances  {}", pass_word(count(|r| r.partition_and_distances.ok) == 0))?;
            writeln!(t, "Y-set symmetry                         {}", pass_word(count(|r| r.swap_symmetric.ok) == 0))?;
            writeln!(t, "Y-set exchange                         {}", pass_word(count(|r| r.exchange.ok) == 0))?;
            match &mu {
                Ok(r) => {
                    writeln!(t, "mu-graph octahedron ({} pairs)  {}", r.pairs_checked, pass_word(r.pass))?;
                    if let Some(w) = &r.violation {
                        writeln!(t, "  ({},{}) mu-size {}: {}", w.x, w.z, w.mu_size, w.reason)?;
                    }
                }
                Err(e) => writeln!(t, "mu-graph: {e}")?,
            }
            emit(output, &t)?;
        }
    }
    Ok(!expect_pass || (neighbourhood_ok && mu_ok))
}

fn pass_word(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

fn search(
    spec: &[String],
    opts: &SearchOptions,
    dgf_dir: Option<PathBuf>,
    expect_classes: Option<usize>,
    output: &Output,
) -> Result<bool> {
    let (graph, id) = match spec {
        [path] => {
            let p = Path::new(path);
            let g = read_input(Some(p))?;
            let id = p.file_name().map_or_else(|| path.clone(), |f| f.to_string_lossy().into_owned());
            (g, id)
        }
        _ => {
            let g = labeled_spec(spec)?;
            (g.graph().clone(), g.name())
        }
    };
    let start = Instant::now();
    let report = search_commutative_wdrd(&graph, &id, opts)?;
    eprintln!("search took {:.2}s with {} job(s)", start.elapsed().as_secs_f64(), opts.jobs);

    if let Some(dir) = dgf_dir {
        fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
        for (i, class) in report.iso_classes.iter().enumerate() {
            let path = dir.join(format!("class_{i}.dgf"));
            fs::write(&path, &class.dgf).with_context(|| format!("writing {}", path.display()))?;
        }
    }
    match output.format {
        Format::Json => emit_json(output, &serde_json::to_value(&report)?)?,
        Format::Table => emit(output, &report.to_string())?,
    }
    let ok = expect_classes.map_or(true, |k| k == report.iso_classes.len());
    if !ok {
        eprintln!("expected {} classes, found {}", expect_classes.unwrap_or(0), report.iso_classes.len());
    }
    Ok(ok)
}

fn iso(a: &Path, b: &Path, expect: Option<IsoExpect>, cap: usize, output: &Output) -> Result<bool> {
    let (da, db) = (read_input(Some(a))?, read_input(Some(b))?);
    let same = are_isomorphic(&da, &db, cap)?;
    let v = json!({
        "isomorphic": same,
        "canonical_a": canonical_form(&da, cap)?.to_string(),
        "canonical_b": canonical_form(&db, cap)?.to_string(),
    });
    match output.format {
        Format::Json => emit_json(output, &v)?,
        Format::Table => emit(output, &format!("{}\n", if same { "isomorphic" } else { "not isomorphic" }))?,
    }
    Ok(match expect {
        None => true,
        Some(IsoExpect::Iso) => same,
        Some(IsoExpect::NonIso) => !same,
    })
}
