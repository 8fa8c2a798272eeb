use mathrepro::runner::*;
use num_bigint::BigInt;
use proptest::prelude::*;

fn run(env: &mut Environment, src: &str) -> Vec<String> {
    env.run(src).rendered()
}

fn fresh(src: &str) -> Vec<String> {
    let dir = tempfile::tempdir().unwrap();
    run(&mut Environment::new(dir.path()), src)
}

#[test]
fn arithmetic_and_precedence() {
    assert_eq!(fresh("1 + 2 * 3"), ["7"]);
    assert_eq!(fresh("(1 + 2) * 3"), ["9"]);
    assert_eq!(fresh("2^3^2"), ["512"]);
    assert_eq!(fresh("-2^2"), ["-4"]);
    assert_eq!(fresh("2 - 3 - 4"), ["-5"]);
    assert_eq!(fresh("2^100"), ["1267650600228229401496703205376"]);
    assert_eq!(fresh("1 + 1 == 2"), ["true"]);
    assert_eq!(fresh("[1, 2 * 2, \"a\"]"), ["[1, 4, \"a\"]"]);
    assert_eq!(fresh("(1, 2)"), ["(1, 2)"]);
    assert_eq!(fresh("2^-1"), ["error: negative exponent for an Int"]);
}

#[test]
fn assignment_prints_and_semicolon_silences() {
    let mut env = Environment::default();
    assert_eq!(run(&mut env, "a = 5"), ["5"]);
    assert_eq!(run(&mut env, "b = a * a;"), Vec::<String>::new());
    assert_eq!(run(&mut env, "b; a; b + a"), ["30"]);
    assert_eq!(run(&mut env, "u, v = (1, 2)"), ["(1, 2)"]);
    assert_eq!(run(&mut env, "v"), ["2"]);
    assert_eq!(run(&mut env, "# just a comment"), Vec::<String>::new());
}

#[test]
fn errors_render_on_one_line() {
    assert_eq!(fresh("x + 1"), ["error: undefined variable 'x'"]);
    assert_eq!(fresh("GF(8)"), ["error: 8 is not prime"]);
    assert_eq!(fresh("1 +"), ["error: parse error at 1:4: expected an expression, found end of input"]);
    assert_eq!(fresh("snf(1)"), ["error: snf: expected a Matrix, got Int"]);
    assert_eq!(fresh("GF()"), ["error: GF expects 1 to 2 argument(s), got 0"]);
    assert_eq!(fresh("a, b = (1, 2, 3)"), ["error: cannot destructure 3 values into 2 names"]);
    assert_eq!(fresh("load(\"missing.mrdi\")").len(), 1);
    assert!(fresh("load(\"missing.mrdi\")")[0].starts_with("error: missing.mrdi: "));
    // Output printed before the failing statement is kept.
    assert_eq!(fresh("1; 2\n3\ny"), ["2", "3", "error: undefined variable 'y'"]);
    // A line that does not parse runs nothing.
    let mut env = Environment::default();
    run(&mut env, "z = 1; 1 +");
    assert_eq!(run(&mut env, "z"), ["error: undefined variable 'z'"]);
}

#[test]
fn field_and_ring_printing() {
    assert_eq!(fresh("GF(7)"), ["GF(7)"]);
    assert_eq!(fresh("F = GF(7, 2); o = gen(F); 3*o + 2"), ["3*o + 2"]);
    assert_eq!(fresh("F = GF(7); F(10)"), ["3"]);
    assert_eq!(fresh("o = gen(GF(7, 2)); o^48 == 1"), ["true"]);
    assert_eq!(fresh("o = gen(GF(7, 2)); o^-1 * o"), ["1"]);
    assert_eq!(
        fresh("R, x, y = polynomial_ring(GF(7), [\"x\", \"y\"]); R"),
        ["Multivariate polynomial ring in 2 variables x, y over GF(7)"]
    );
    assert_eq!(
        fresh("F = GF(7, 2); o = gen(F); R, x, y = polynomial_ring(F, [\"x\", \"y\"]); (3*o + 2)*x^2*y + o*y + 5"),
        ["(3*o + 2)*x^2*y + o*y + 5"]
    );
    assert_eq!(fresh("R, x = polynomial_ring(GF(5), [\"x\"]); (x + 1)^5"), ["x^5 + 1"]);
    assert_eq!(fresh("R, x = polynomial_ring(GF(5), [\"x\"]); parent(x) == R"), ["true"]);
    assert_eq!(fresh("R, x = polynomial_ring(GF(5), [\"x\"]); R(7) + x"), ["x + 2"]);
}

#[test]
fn smith_normal_form_builtins() {
    assert_eq!(fresh("snf(matrix([[2, 0], [0, 3]]))"), ["[1   0]", "[0   6]"]);
    assert_eq!(fresh("snf_generic(matrix([2, 0], [0, 3]))"), ["[1   0]", "[0   6]"]);
    assert_eq!(
        fresh("m = matrix([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]); snf(m) == snf_generic(m)"),
        ["true"]
    );
    assert_eq!(fresh("snf(matrix([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]))"), [
        "[2   0    0]",
        "[0   6    0]",
        "[0   0   12]"
    ]);
    assert!(fresh("matrix([[1, 2], [3]])")[0].starts_with("error: "));
}

#[test]
fn saved_files_share_parents_within_one_environment() {
    let dir = tempfile::tempdir().unwrap();
    let mut alice = Environment::new(dir.path());
    run(&mut alice, "F = GF(7, 2); o = gen(F); R, x, y = polynomial_ring(F, [\"x\", \"y\"]);");
    run(&mut alice, "p = x^2 + o*y; q = (x + y)^2 + 3;");
    assert!(run(&mut alice, "save(\"p.mrdi\", p); save(\"q.mrdi\", q)").is_empty());
    let expected = run(&mut alice, "p + q");

    let mut bob = Environment::new(dir.path());
    assert_eq!(run(&mut bob, "p = load(\"p.mrdi\"); q = load(\"q.mrdi\"); p + q"), expected);
    assert_eq!(expected, ["2*x^2 + 2*x*y + y^2 + o*y + 3"]);

    let mut one = Environment::new(dir.path());
    let mut two = Environment::new(dir.path());
    run(&mut one, "p = load(\"p.mrdi\");");
    let q = two.run("load(\"q.mrdi\")");
    assert!(q.error.is_none());
    run(&mut two, "q = load(\"q.mrdi\");");
    let q_value = two.get("q").unwrap().clone();
    one.set("q", q_value);
    assert_eq!(
        run(&mut one, "p + q"),
        ["error: parent mismatch: operands belong to different rings"]
    );
}

#[test]
fn versioninfo_builtin() {
    let out = fresh("versioninfo()");
    assert!(out[0].starts_with("mathrepro version "));
    assert!(!out.iter().any(|l| l.starts_with("Dependencies")));
    let full = fresh("versioninfo(\"full\")");
    assert!(full.iter().any(|l| l.starts_with("Dependencies")));
}

// Expression trees against a direct BigInt evaluation.

#[derive(Debug, Clone)]
enum E {
    N(i64),
    Neg(Box<E>),
    Add(Box<E>, Box<E>),
    Sub(Box<E>, Box<E>),
    Mul(Box<E>, Box<E>),
    Pow(Box<E>, u32),
}

fn eval(e: &E) -> BigInt {
    match e {
        E::N(v) => BigInt::from(*v),
        E::Neg(a) => -eval(a),
        E::Add(a, b) => eval(a) + eval(b),
        E::Sub(a, b) => eval(a) - eval(b),
        E::Mul(a, b) => eval(a) * eval(b),
        E::Pow(a, k) => num_traits::pow(eval(a), *k as usize),
    }
}

/// Prints with the fewest parentheses the grammar allows.
fn show(e: &E) -> String {
    fn prec(e: &E) -> u8 {
        match e {
            E::N(_) => 5,
            E::Pow(..) => 4,
            E::Neg(_) => 3,
            E::Mul(..) => 2,
            E::Add(..) | E::Sub(..) => 1,
        }
    }
    fn wrap(e: &E, min: u8) -> String {
        if prec(e) < min {
            format!("({})", show(e))
        } else {
            show(e)
        }
    }
    match e {
        E::N(v) if *v < 0 => format!("({v})"),
        E::N(v) => v.to_string(),
        E::Neg(a) => format!("-{}", wrap(a, 3)),
        E::Add(a, b) => format!("{} + {}", wrap(a, 1), wrap(b, 2)),
        E::Sub(a, b) => format!("{} - {}", wrap(a, 1), wrap(b, 2)),
        // A factor may be a negation: `2 * -3` parses.
        E::Mul(a, b) => format!("{} * {}", wrap(a, 2), wrap(b, 3)),
        E::Pow(a, k) => format!("{}^{k}", wrap(a, 5)),
    }
}

fn expr_strategy() -> impl Strategy<Value = E> {
    let leaf = (-20i64..20).prop_map(E::N);
    leaf.prop_recursive(5, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| E::Neg(Box::new(a))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| E::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| E::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| E::Mul(Box::new(a), Box::new(b))),
            (inner, 0u32..4).prop_map(|(a, k)| E::Pow(Box::new(a), k)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn integer_expressions_match_reference(e in expr_strategy()) {
        let src = show(&e);
        prop_assert_eq!(fresh(&src), vec![eval(&e).to_string()], "{}", src);
    }
}

// Doctest pipeline.

fn opts(dir: &std::path::Path) -> RunOptions {
    RunOptions {
        base_dir: dir.to_path_buf(),
        ..RunOptions::default()
    }
}

fn check(doc: &str) -> RunReport {
    let dir = tempfile::tempdir().unwrap();
    check_document(doc, &opts(dir.path())).unwrap()
}

#[test]
fn extraction() {
    let doc = "Intro\n```repl label=a\n>> 1 + 1\n2\n>> 3\n3\n```\ntext\n";
    let blocks = extract_blocks(doc).unwrap();
    assert_eq!(blocks.len(), 1);
    assert_eq!(blocks[0].label, "a");
    assert_eq!(blocks[0].line, 2);
    assert_eq!(blocks[0].entries.len(), 2);
    assert_eq!(blocks[0].entries[0].input, "1 + 1");
    assert_eq!(blocks[0].entries[0].expected, ["2"]);

    assert_eq!(extract_blocks("no blocks here\n```julia\n>> 1\n```\n").unwrap(), vec![]);
    assert_eq!(
        extract_blocks("a\n\n```repl label=x\n>> 1\n").unwrap_err(),
        DoctestError::UnterminatedBlock { line: 3 }
    );
    assert_eq!(
        extract_blocks("```repl\n>> 1\n```\n").unwrap_err(),
        DoctestError::MissingLabel { line: 1 }
    );
    let latex = "\\section{A}\n\\begin{repltest}{ring}\n>> 2 * 3\n6\n\\end{repltest}\n\\begin{repltest}\n";
    assert_eq!(
        extract_blocks(latex).unwrap_err(),
        DoctestError::MissingLabel { line: 6 }
    );
    let blocks = extract_blocks(&latex[..latex.len() - "\\begin{repltest}\n".len()]).unwrap();
    assert_eq!((blocks[0].syntax, blocks[0].label.as_str()), (Syntax::Latex, "ring"));
}

#[test]
fn labels_share_and_isolate_environments() {
    let same = "```repl label=a\n>> R, x, y = polynomial_ring(GF(7), [\"x\", \"y\"]);\n```\n\n```repl label=a\n>> x + y\nx + y\n```\n";
    let report = check(same);
    assert_eq!(report.totals().passed, 2);

    let split = same.replacen("label=a", "label=b", 1);
    let report = check(&split);
    assert_eq!(report.results[0].status, BlockStatus::Pass);
    assert_eq!(
        report.results[1].status,
        BlockStatus::Error("undefined variable 'x'".into())
    );
}

#[test]
fn pass_fail_and_fix() {
    let passing = "```repl label=a\n>> 1 + 1\n2\n```\n";
    let report = check(passing);
    assert_eq!(report.totals().to_string(), "1 blocks, 1 passed");
    assert_eq!(fix_document(passing, &report).unwrap(), passing);

    let drifted = "Before\n```repl label=a\n>> 1 + 1\n3\n```\nAfter\n";
    let report = check(drifted);
    match &report.results[0].status {
        BlockStatus::Fail(diffs) => {
            assert_eq!(
                diffs,
                &vec![LineDiff {
                    line: 4,
                    expected: Some("3".into()),
                    actual: Some("2".into())
                }]
            );
        }
        other => panic!("{other:?}"),
    }
    assert_eq!(report.totals().to_string(), "1 blocks, 0 passed, 1 failed");
    let fixed = fix_document(drifted, &report).unwrap();
    assert_eq!(fixed, "Before\n```repl label=a\n>> 1 + 1\n2\n```\nAfter\n");
    assert!(check(&fixed).totals().all_passed());

    let edited = drifted.replace("After", "Later");
    assert_eq!(fix_document(&edited, &report).unwrap_err(), DoctestError::StaleReport);
}

#[test]
fn error_output_is_compared() {
    let doc = "```repl label=a\n>> x + 1\nerror: undefined variable 'x'\n```\n";
    assert!(check(doc).totals().all_passed());
    let wrong = doc.replace("'x'", "'y'");
    let report = check(&wrong);
    assert_eq!(report.totals().errored, 1);
    assert!(check(&fix_document(&wrong, &report).unwrap()).totals().all_passed());
}

#[test]
fn missing_and_extra_lines_are_diffed() {
    let doc = "```repl label=a\n>> 1;\n5\n>> 2\n\n>> 3\n```\n";
    let report = check(doc);
    let diffs = &report.results[0].diffs;
    assert_eq!(
        diffs,
        &vec![
            LineDiff { line: 3, expected: Some("5".into()), actual: None },
            LineDiff { line: 5, expected: None, actual: Some("2".into()) },
            LineDiff { line: 7, expected: None, actual: Some("3".into()) },
        ]
    );
    let fixed = fix_document(doc, &report).unwrap();
    assert_eq!(fixed, "```repl label=a\n>> 1;\n>> 2\n2\n\n>> 3\n3\n```\n");
    assert!(check(&fixed).totals().all_passed());
}

#[test]
fn prelude_runs_per_label() {
    let dir = tempfile::tempdir().unwrap();
    let mut options = opts(dir.path());
    options.prelude = Some("F = GF(5)\nR, t = polynomial_ring(F, [\"t\"])\n".into());
    let doc = "```repl label=a\n>> t^5 + 1\nt^5 + 1\n>> t = 1\n1\n```\n```repl label=b\n>> t + 4\nt + 4\n```\n";
    let report = check_document(doc, &options).unwrap();
    assert!(report.totals().all_passed(), "{:?}", report.results);

    options.prelude = Some("nope(".into());
    let report = check_document(doc, &options).unwrap();
    assert_eq!(report.totals().errored, 2);
    match &report.results[0].status {
        BlockStatus::Error(msg) => assert!(msg.starts_with("prelude: parse error")),
        other => panic!("{other:?}"),
    }
}

#[test]
fn json_report_has_sorted_keys() {
    let report = check("```repl label=a\n>> 1\n2\n```\n");
    let text = serde_json::to_string(&report.to_json("doc.md")).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["totals"]["failed"], 1);
    assert_eq!(value["blocks"][0]["status"], "fail");
    assert_eq!(value["blocks"][0]["diffs"][0]["actual"], "1");
    let keys: Vec<&String> = value.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["blocks", "document_sha256", "elapsed_ms", "path", "totals"]);
}

// Generated documents.

const INPUTS: [&str; 8] = ["1 + 1", "x = 3", "x * 2", "y", "GF(7)(10)", "z = x^2;", "[x, 1]", "2^10"];
const OUTPUTS: [&str; 6] = ["2", "3", "6", "", "error: undefined variable 'y'", "9\n10"];

#[derive(Debug, Clone)]
struct GenBlock {
    label: usize,
    latex: bool,
    entries: Vec<(usize, usize)>,
}

fn render(blocks: &[GenBlock], prose: &[String]) -> String {
    let mut doc = String::new();
    for (i, b) in blocks.iter().enumerate() {
        doc.push_str(&prose[i % prose.len()]);
        doc.push('\n');
        let label = ["a", "b", "c"][b.label];
        if b.latex {
            doc.push_str(&format!("\\begin{{repltest}}{{{label}}}\n"));
        } else {
            doc.push_str(&format!("```repl label={label}\n"));
        }
        for &(i, o) in &b.entries {
            doc.push_str(&format!(">> {}\n", INPUTS[i]));
            if !OUTPUTS[o].is_empty() {
                doc.push_str(OUTPUTS[o]);
                doc.push('\n');
            }
        }
        doc.push_str(if b.latex { "\\end{repltest}\n" } else { "```\n" });
    }
    doc.push_str("The end.\n");
    doc
}

fn block_strategy() -> impl Strategy<Value = GenBlock> {
    (0usize..3, any::<bool>(), prop::collection::vec((0usize..8, 0usize..6), 1..4))
        .prop_map(|(label, latex, entries)| GenBlock { label, latex, entries })
}

fn doc_strategy() -> impl Strategy<Value = (Vec<GenBlock>, Vec<String>)> {
    (
        prop::collection::vec(block_strategy(), 0..6),
        prop::collection::vec("[a-z ]{0,12}", 1..4),
    )
}

/// Bytes of `doc` outside every entry's output span.
fn outside_outputs(doc: &str) -> String {
    let mut out = String::new();
    let mut pos = 0;
    for b in extract_blocks(doc).unwrap() {
        for e in b.entries {
            out.push_str(&doc[pos..e.output_span.start]);
            pos = e.output_span.end;
        }
    }
    out.push_str(&doc[pos..]);
    out
}

fn statuses(report: &RunReport) -> Vec<(String, bool)> {
    report
        .results
        .iter()
        .map(|r| (r.label.clone(), r.status == BlockStatus::Pass))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fix_is_idempotent_and_local((blocks, prose) in doc_strategy()) {
        let doc = render(&blocks, &prose);
        let report = check(&doc);
        prop_assert_eq!(&report, &check(&doc));
        let fixed = fix_document(&doc, &report).unwrap();
        let recheck = check(&fixed);
        prop_assert!(recheck.totals().all_passed(), "{:?}", recheck.results);
        prop_assert_eq!(&fix_document(&fixed, &recheck).unwrap(), &fixed);
        prop_assert_eq!(outside_outputs(&doc), outside_outputs(&fixed));
    }

    #[test]
    fn label_groups_can_be_reordered((blocks, prose) in doc_strategy()) {
        let report = check(&render(&blocks, &prose));
        // Stable sort by label keeps each label's own order.
        let mut order: Vec<usize> = (0..blocks.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(blocks[i].label));
        let permuted: Vec<GenBlock> = order.iter().map(|&i| blocks[i].clone()).collect();
        let other = check(&render(&permuted, &prose));
        let mut expected: Vec<(String, bool)> = order.iter().map(|&i| statuses(&report)[i].clone()).collect();
        expected.truncate(blocks.len());
        prop_assert_eq!(statuses(&other), expected);
    }
}
