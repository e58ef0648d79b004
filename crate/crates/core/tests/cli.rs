use phi_orbits::cli::{run, ExoticRecord, RelaxedRecord, SolutionRecord, TheoremCheck};
use phi_orbits::diophantine::SolutionKind;
use phi_orbits::sieve::SearchCheckpoint;
use serde::de::DeserializeOwned;
use serde_json::Value;

struct Invocation {
    code: i32,
    stdout: String,
    stderr: String,
}

fn invoke(args: &[&str]) -> Invocation {
    let argv: Vec<String> = std::iter::once("phi-orbits")
        .chain(args.iter().copied())
        .map(String::from)
        .collect();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(&argv, &mut out, &mut err);
    Invocation {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn lines(text: &str) -> Vec<Value> {
    text.lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

/// Records with the given tag, parsed into `T`.
fn records<T: DeserializeOwned>(text: &str, tag: &str) -> Vec<T> {
    lines(text)
        .into_iter()
        .filter(|v| v["record"] == tag)
        .map(|mut v| {
            v.as_object_mut().unwrap().remove("record");
            serde_json::from_value(v).unwrap()
        })
        .collect()
}

/// Output with the timing field blanked.
fn without_timing(text: &str) -> String {
    lines(text)
        .into_iter()
        .map(|mut v| {
            if let Some(obj) = v.as_object_mut() {
                obj.remove("elapsed_ms");
            }
            v.to_string()
        })
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn output_frame_is_header_records_summary() {
    let out = invoke(&["families", "--max-exponent", "3"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let all = lines(&out.stdout);
    assert_eq!(all[0]["record"], "run");
    assert_eq!(all[0]["parameters"]["max_exponent"], "3");
    let summary = all.last().unwrap();
    assert_eq!(summary["record"], "summary");
    assert_eq!(summary["status"], "ok");
    assert_eq!(summary["results"], all.len() - 2);
    // 2^2, 2^3 and ℓ = 1..3 for five families
    assert_eq!(all.len() - 2, 2 + 5 * 3);
    for line in out.stdout.lines() {
        assert!(line.starts_with("{\"record\":"), "{line}");
    }
}

#[test]
fn solutions_round_trip_and_agree() {
    let out = invoke(&["solutions", "--limit", "100000", "--jobs", "2"]);
    assert_eq!(out.code, 0);
    let recs: Vec<SolutionRecord> = records(&out.stdout, "solution");
    assert!(!recs.is_empty());
    for r in &recs {
        assert_eq!(r.in_oracle, Some(true));
        assert_ne!(r.kind, Some(SolutionKind::NotSolution));
        assert_eq!(r.ell, r.n.trailing_zeros());
    }
    assert!(recs.windows(2).all(|w| w[0].n < w[1].n));
    let brute = invoke(&["solutions", "--limit", "100000", "--method", "brute"]);
    let brute: Vec<SolutionRecord> = records(&brute.stdout, "solution");
    let ns: Vec<u64> = brute.iter().map(|r| r.n).collect();
    assert_eq!(ns, recs.iter().map(|r| r.n).collect::<Vec<_>>());
    assert!(brute.iter().all(|r| r.kind.is_none()));
}

#[test]
fn results_do_not_depend_on_jobs() {
    for args in [
        vec!["solutions", "--limit", "20000"],
        vec!["verify-theorem", "--limit", "20000"],
        vec![
            "search-exotic",
            "--from",
            "2",
            "--to",
            "300000",
            "--segment-size",
            "4099",
        ],
        vec![
            "search-relaxed",
            "--limit",
            "100000",
            "--segment-size",
            "9999",
        ],
        vec![
            "scan-orbits",
            "--limit",
            "400",
            "--kmax",
            "30",
            "--rmax",
            "6",
        ],
    ] {
        let mut seen: Option<String> = None;
        for jobs in ["1", "3", "8"] {
            let mut a = args.clone();
            a.extend(["--jobs", jobs]);
            let out = invoke(&a);
            assert_eq!(out.code, 0, "{a:?}: {}", out.stderr);
            let text = without_timing(&out.stdout);
            // parameters record the job count, so compare from the first record on
            let body: String = text.lines().skip(1).collect::<Vec<_>>().join("\n");
            match &seen {
                Some(prev) => assert_eq!(prev, &body, "{a:?}"),
                None => seen = Some(body),
            }
        }
    }
}

#[test]
fn verify_theorem_reports_no_mismatch() {
    let out = invoke(&["verify-theorem", "--limit", "200000"]);
    assert_eq!(out.code, 0);
    let check: Vec<TheoremCheck> = records(&out.stdout, "theorem_check");
    assert_eq!(check.len(), 1);
    assert_eq!(check[0].mismatches, 0);
    assert_eq!(check[0].oracle_solutions, check[0].classified_solutions);
    assert_eq!(check[0].first_mismatch, None);
}

#[test]
fn exotic_search_resumes_from_checkpoint() {
    let dir = tempfile::tempdir().unwrap();
    let cp = dir.path().join("exotic.cp");
    let cp_arg = cp.to_str().unwrap();
    let base = [
        "search-exotic",
        "--from",
        "2",
        "--to",
        "50000",
        "--segment-size",
        "10",
    ];

    let mut first: Vec<&str> = base.to_vec();
    first.extend(["--checkpoint", cp_arg, "--stop-after-segments", "4"]);
    let out = invoke(&first);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let partial: Vec<ExoticRecord> = records(&out.stdout, "exotic");
    assert_eq!(partial.iter().map(|r| r.p).collect::<Vec<_>>(), vec![7]);
    let stored = std::fs::read_to_string(&cp).unwrap();
    assert_eq!(
        stored,
        "search_id exotic-prime:from=2:to=50000\ncompleted 42\n7\n"
    );

    let mut second: Vec<&str> = base.to_vec();
    second.extend(["--checkpoint", cp_arg]);
    let resumed = invoke(&second);
    let whole = invoke(&base);
    let resumed: Vec<ExoticRecord> = records(&resumed.stdout, "exotic");
    let whole: Vec<ExoticRecord> = records(&whole.stdout, "exotic");
    assert_eq!(resumed, whole);
    assert_eq!(
        whole.iter().map(|r| (r.m, r.p, r.q)).collect::<Vec<_>>(),
        vec![(0, 7, 5), (5, 47, 35)]
    );
    let done = SearchCheckpoint::load(&cp).unwrap().unwrap();
    assert_eq!(done.last_completed_hi, 50000);
    assert_eq!(done.hits, vec![7, 47]);
}

#[test]
fn foreign_checkpoint_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let cp = dir.path().join("other.cp");
    std::fs::write(&cp, "search_id relaxed:limit=10\ncompleted 5\n").unwrap();
    let out = invoke(&[
        "search-exotic",
        "--from",
        "2",
        "--to",
        "100",
        "--checkpoint",
        cp.to_str().unwrap(),
    ]);
    assert_eq!(out.code, 2);
    let err = lines(&out.stderr);
    assert_eq!(err.last().unwrap()["kind"], "checkpoint");
}

#[test]
fn relaxed_records_carry_factorizations() {
    let out = invoke(&["search-relaxed", "--limit", "2000"]);
    let recs: Vec<RelaxedRecord> = records(&out.stdout, "relaxed");
    let got: Vec<(u64, &str)> = recs
        .iter()
        .map(|r| (r.n, r.factorization.as_str()))
        .collect();
    assert_eq!(got, vec![(5, "5"), (35, "5 * 7"), (1295, "5 * 7 * 37")]);
}

#[test]
fn csv_output_has_one_header() {
    let out = invoke(&[
        "--format",
        "csv",
        "solutions",
        "--limit",
        "30",
        "--method",
        "brute",
    ]);
    assert_eq!(out.code, 0);
    let rows: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(rows[0], "n,in_oracle,kind,ell,exotic_m");
    assert_eq!(rows.iter().filter(|r| r.starts_with("n,")).count(), 1);
    let ns: Vec<&str> = rows[1..]
        .iter()
        .map(|r| r.split(',').next().unwrap())
        .collect();
    assert_eq!(
        ns,
        ["4", "6", "8", "10", "12", "14", "16", "20", "24", "28"]
    );
    assert!(out.stderr.contains("\"record\":\"summary\""));
}

#[test]
fn orbit_and_trace_records() {
    let out = invoke(&["orbit", "--n", "94", "--kmax", "20", "--rmax", "2"]);
    let rel = &lines(&out.stdout)[1];
    assert_eq!(rel["record"], "relation");
    assert_eq!(
        (rel["r"].as_u64(), rel["M"].as_u64(), rel["k0"].as_u64()),
        (Some(2), Some(2), Some(0))
    );
    assert_eq!(rel["persistent"], "ProvenForever");

    let out = invoke(&["trace", "--n", "70"]);
    let t = &lines(&out.stdout)[1];
    assert_eq!(t["case"], "Case_l2_gt_l1");
    assert_eq!((t["ell1"].as_u64(), t["ell2"].as_u64()), (Some(1), Some(3)));
    assert_eq!(
        (
            t["p"].as_u64(),
            t["alpha"].as_u64(),
            t["k"].as_u64(),
            t["q"].as_u64()
        ),
        (Some(47), Some(1), Some(2), Some(35))
    );
    assert_eq!(t["phi_q_check"], true);
}

#[test]
fn huge_values_stay_exact_in_json() {
    let out = invoke(&["families", "--max-exponent", "120"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let big = out
        .stdout
        .lines()
        .find(|l| l.contains("\"kind\":\"Family47\",\"ell\":120"))
        .unwrap();
    let expected = (47u128 << 120).to_string();
    assert!(big.contains(&format!("\"n\":{expected}")), "{big}");
}

#[test]
fn exit_codes() {
    assert_eq!(invoke(&["no-such-command"]).code, 2);
    assert_eq!(invoke(&["solutions"]).code, 2);
    assert_eq!(invoke(&["trace", "--n", "9"]).code, 2);
    assert_eq!(
        invoke(&["orbit", "--n", "5", "--kmax", "3", "--rmax", "4"]).code,
        2
    );
    assert_eq!(
        invoke(&["search-exotic", "--from", "1", "--to", "10"]).code,
        2
    );
    assert_eq!(
        invoke(&["search-exotic", "--from", "10", "--to", "10"]).code,
        2
    );
    let bad = invoke(&["trace", "--n", "9"]);
    let err = lines(&bad.stderr);
    let last = err.last().unwrap();
    assert_eq!(last["record"], "error");
    assert_eq!(last["exit_code"], 2);
    assert_eq!(last["kind"], "precondition");
}
