//! Replays every bundled instance through the report code paths and diffs
//! the results against the golden outputs compiled into the binary.

use quiver_chow::input::parse_instance;
use quiver_chow::presentation::StabilityMode;

use crate::report;
use crate::{CliError, Format};

struct Case {
    name: &'static str,
    fixture: &'static str,
    golden: &'static str,
    run: fn(&quiver_chow::input::Instance) -> Result<String, CliError>,
}

macro_rules! case {
    ($name:literal, $fixture:literal, $golden:literal, $run:expr) => {
        Case {
            name: $name,
            fixture: include_str!(concat!("../fixtures/", $fixture)),
            golden: include_str!(concat!("../golden/", $golden)),
            run: $run,
        }
    };
}

fn cases() -> Vec<Case> {
    vec![
        case!(
            "p1 fixed-points",
            "p1.quiver",
            "p1__fixed-points.txt",
            |i| { report::fixed_points_report(i, Format::Text) }
        ),
        case!(
            "p2 fixed-points",
            "p2.quiver",
            "p2__fixed-points.txt",
            |i| { report::fixed_points_report(i, Format::Text) }
        ),
        case!(
            "p3 fixed-points",
            "p3.quiver",
            "p3__fixed-points.txt",
            |i| { report::fixed_points_report(i, Format::Text) }
        ),
        case!(
            "p4 fixed-points",
            "p4.quiver",
            "p4__fixed-points.txt",
            |i| { report::fixed_points_report(i, Format::Text) }
        ),
        case!("p1 localize", "p1.quiver", "p1__localize.txt", |i| {
            report::localize_report(i, Format::Text, 1)
        }),
        case!("p2 localize", "p2.quiver", "p2__localize.txt", |i| {
            report::localize_report(i, Format::Text, 1)
        }),
        case!("p2 present", "p2.quiver", "p2__present-st-3.txt", |i| {
            report::present_report(i, StabilityMode::Stable, 3, Format::Text)
        }),
        case!(
            "kronecker23 fixed-points",
            "kronecker23.quiver",
            "kronecker23__fixed-points.txt",
            |i| report::fixed_points_report(i, Format::Text)
        ),
        case!(
            "kronecker23 localize",
            "kronecker23.quiver",
            "kronecker23__localize.txt",
            |i| report::localize_report(i, Format::Text, 1)
        ),
        case!("k23 trees", "k23.quiver", "k23__trees.txt", |i| {
            report::trees_report(i)
        }),
        case!("k23 edges", "k23.quiver", "k23__edges.txt", |i| {
            report::edges_report(i, false)
        }),
        case!("k23 basis", "k23.quiver", "k23__basis-2.txt", |i| {
            report::basis_report(i, 2)
        }),
        case!("path3 trees", "path3.quiver", "path3__trees.txt", |i| {
            report::trees_report(i)
        }),
        case!("path3 edges", "path3.quiver", "path3__edges.txt", |i| {
            report::edges_report(i, false)
        }),
    ]
}

pub fn verify_examples() -> Result<(String, bool), CliError> {
    let mut out = String::new();
    let mut all_ok = true;
    for case in cases() {
        let inst = parse_instance(case.fixture)
            .map_err(|e| CliError::Parse(format!("{}: {e}", case.name)))?;
        let got = (case.run)(&inst)?;
        if got == case.golden {
            out.push_str(&format!("verify {}: OK\n", case.name));
        } else {
            all_ok = false;
            out.push_str(&format!("verify {}: DIFF\n", case.name));
            for (k, (g, w)) in got.lines().zip(case.golden.lines()).enumerate() {
                if g != w {
                    out.push_str(&format!("  first difference at line {}:\n", k + 1));
                    out.push_str(&format!("    got:    {g}\n"));
                    out.push_str(&format!("    golden: {w}\n"));
                    break;
                }
            }
            let (got_n, want_n) = (got.lines().count(), case.golden.lines().count());
            if got_n != want_n {
                out.push_str(&format!("  line counts differ: {got_n} vs {want_n}\n"));
            }
        }
    }
    out.push_str(if all_ok {
        "verify-examples: all golden outputs match\n"
    } else {
        "verify-examples: DIFFERENCES FOUND\n"
    });
    Ok((out, all_ok))
}
