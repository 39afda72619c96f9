//! Markdown and CSV renderings of reports and tables.

use std::fmt::Write;

use skly_core::paperchecks::{CheckReport, Status};

use crate::artifact::{HilbertArtifact, RunArtifact};

fn cell(v: Option<i64>) -> String {
    v.map_or_else(|| "-".into(), |x| x.to_string())
}

fn status(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "FAIL",
        Status::Skipped => "skipped",
        Status::Observed => "observed",
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn header(out: &mut String, art: &RunArtifact) {
    let c = &art.config;
    let [a, b, cc] = art.abc;
    let _ = writeln!(
        out,
        "seed {}, prime {}, (a, b, c) = ({a}, {b}, {cc}), cap {}\n",
        c.seed, c.prime, c.cap
    );
}

/// One line per check.
pub fn summary_md(art: &RunArtifact) -> String {
    let mut out = String::from("# Verification summary\n\n");
    header(&mut out, art);
    out.push_str("| check | pass | fail | skipped | observed | ms | status |\n|---|---|---|---|---|---|---|\n");
    for r in &art.reports {
        let count = |s: Status| r.rows.iter().filter(|row| row.status == s).count();
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} | {} | {} |",
            r.check,
            count(Status::Pass),
            count(Status::Fail),
            count(Status::Skipped),
            count(Status::Observed),
            r.ms,
            if r.pass { "pass" } else { "FAIL" }
        );
    }
    let _ = writeln!(out, "\noverall: {}", if art.pass { "pass" } else { "FAIL" });
    out
}

fn report_md(out: &mut String, r: &CheckReport) {
    let _ = writeln!(out, "## {}\n\n{}\n", r.check, r.anchor);
    for d in &r.params.divisors {
        let _ = writeln!(out, "- {d}");
    }
    if !r.params.divisors.is_empty() {
        out.push('\n');
    }
    out.push_str("| quantity | expected | computed | status |\n|---|---|---|---|\n");
    for row in &r.rows {
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} |",
            row.name.replace('|', "\\|"),
            cell(row.expected),
            cell(row.got),
            status(row.status)
        );
    }
    if let Some(note) = &r.note {
        let _ = writeln!(out, "\nnote: {note}");
    }
    out.push('\n');
}

pub fn run_md(art: &RunArtifact) -> String {
    let mut out = summary_md(art);
    if let Some(g) = &art.geometry {
        out.push_str("\n## derived context\n\n");
        let terms: Vec<String> = g
            .cubic
            .iter()
            .map(|t| format!("{}·{}", t.coeff, t.monomial))
            .collect();
        let _ = writeln!(out, "- cubic: {}", terms.join(" + "));
        let _ = writeln!(out, "- λ: {}", g.lambda);
        let _ = writeln!(out, "- basepoint: {:?}", g.basepoint.coords());
        let _ = writeln!(out, "- translation r: {:?}", g.translation.coords());
        let _ = writeln!(
            out,
            "- order of r exceeds {}: {}",
            g.order_certificate.threshold, g.order_certificate.order_exceeds_threshold
        );
        let terms: Vec<String> =
            g.g.iter()
                .map(|t| format!("{}·{}", t.coeff, t.monomial))
                .collect();
        let _ = writeln!(out, "- g: {}", terms.join(" + "));
    }
    out.push('\n');
    for r in &art.reports {
        report_md(&mut out, r);
    }
    out
}

pub fn run_csv(art: &RunArtifact) -> String {
    let mut out = String::from("check,quantity,expected,computed,status\n");
    for r in &art.reports {
        for row in &r.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                r.check,
                csv_field(&row.name),
                row.expected.map(|x| x.to_string()).unwrap_or_default(),
                row.got.map(|x| x.to_string()).unwrap_or_default(),
                status(row.status).to_lowercase()
            );
        }
    }
    out
}

pub fn hilbert_md(art: &HilbertArtifact) -> String {
    let mut out = format!("# Hilbert table of R(D), deg D = {}\n\n", art.e);
    for p in &art.divisor {
        let _ = writeln!(out, "- {:?}", p.coords());
    }
    out.push_str(
        "\n| n | dim R_n | predicted | mod-g dim | predicted | dim R_n ∩ gS | predicted | match |\n|---|---|---|---|---|---|---|---|\n",
    );
    for r in &art.rows {
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} | {} | {} | {} |",
            r.n,
            r.dim,
            r.predicted_dim,
            r.mod_g,
            r.predicted_mod_g,
            r.g_part,
            r.predicted_g_part,
            r.matches
        );
    }
    out
}

pub fn hilbert_csv(art: &HilbertArtifact) -> String {
    let mut out =
        String::from("n,dim,predicted_dim,mod_g,predicted_mod_g,g_part,predicted_g_part,match\n");
    for r in &art.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.n,
            r.dim,
            r.predicted_dim,
            r.mod_g,
            r.predicted_mod_g,
            r.g_part,
            r.predicted_g_part,
            r.matches
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("a, b"), "\"a, b\"");
        assert_eq!(csv_field("say \"x\""), "\"say \"\"x\"\"\"");
    }
}
