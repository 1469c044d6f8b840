//! Fixed-field MPS export.
//!
//! Rows and columns are emitted in model order with generated names
//! (`R000001…`, objective `OBJ`, columns `C000001…`). Binary variables can be
//! wrapped in `INTORG`/`INTEND` markers so external MILP solvers read the
//! integrality restriction. The objective offset is carried on the RHS of the
//! objective row with the usual sign convention, and the optimization sense
//! is declared in an `OBJSENSE` section.

use super::{LinearProgram, RowSense, Sense};
use std::fmt::Write;

/// Formats a value for a 12-character MPS field.
fn num(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e10 {
        format!("{}", v)
    } else {
        let plain = format!("{}", v);
        if plain.len() <= 12 {
            plain
        } else {
            format!("{:.6e}", v)
        }
    }
}

/// Writes the program in fixed-field MPS.
pub fn write_mps(lp: &LinearProgram) -> String {
    write_mps_with_binaries(lp, &[])
}

/// Writes the program in fixed-field MPS, marking the given columns integral.
pub fn write_mps_with_binaries(lp: &LinearProgram, binaries: &[usize]) -> String {
    let n = lp.num_vars();
    let m = lp.num_rows();
    let mut out = String::new();
    let name: String = lp
        .name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c.to_ascii_uppercase() } else { '_' })
        .take(8)
        .collect();
    let _ = writeln!(out, "NAME          {}", name);
    let _ = writeln!(out, "OBJSENSE");
    let _ = writeln!(
        out,
        "    {}",
        match lp.sense {
            Sense::Minimize => "MIN",
            Sense::Maximize => "MAX",
        }
    );

    let rname = |i: usize| format!("R{:06}", i + 1);
    let cname = |j: usize| format!("C{:06}", j + 1);

    let _ = writeln!(out, "ROWS");
    let _ = writeln!(out, " N  OBJ");
    for i in 0..m {
        let tag = match lp.row_senses[i] {
            RowSense::Le => 'L',
            RowSense::Eq => 'E',
            RowSense::Ge => 'G',
        };
        let _ = writeln!(out, " {}  {}", tag, rname(i));
    }

    // Column-major assembly in model order.
    let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for &(r, c, v) in &lp.triplets {
        cols[c as usize].push((r as usize, v));
    }
    for col in cols.iter_mut() {
        col.sort_unstable_by_key(|e| e.0);
    }

    let is_binary = |j: usize| binaries.contains(&j);
    let _ = writeln!(out, "COLUMNS");
    let mut in_int = false;
    let mut marker = 0usize;
    for j in 0..n {
        if is_binary(j) != in_int {
            marker += 1;
            let tag = if in_int { "INTEND" } else { "INTORG" };
            let _ = writeln!(
                out,
                "    MARKER{:02}  'MARKER'                 '{}'",
                marker, tag
            );
            in_int = !in_int;
        }
        let mut fields: Vec<(String, f64)> = Vec::new();
        if lp.objective[j] != 0.0 {
            fields.push(("OBJ".to_owned(), lp.objective[j]));
        }
        for &(r, v) in &cols[j] {
            fields.push((rname(r), v));
        }
        if fields.is_empty() {
            // Column must still appear so bounds can reference it.
            fields.push(("OBJ".to_owned(), 0.0));
        }
        for pair in fields.chunks(2) {
            let mut line = format!("    {:<8}  {:<8}  {:<12}", cname(j), pair[0].0, num(pair[0].1));
            if let Some(second) = pair.get(1) {
                let _ = write!(line, "   {:<8}  {:<12}", second.0, num(second.1));
            }
            let _ = writeln!(out, "{}", line.trim_end());
        }
    }
    if in_int {
        marker += 1;
        let _ = writeln!(
            out,
            "    MARKER{:02}  'MARKER'                 'INTEND'",
            marker
        );
    }

    let _ = writeln!(out, "RHS");
    // Objective offset: stored negated on the objective row per convention.
    if lp.objective_offset != 0.0 {
        let _ = writeln!(
            out,
            "    RHS       OBJ       {:<12}",
            num(-lp.objective_offset)
        );
    }
    for i in 0..m {
        if lp.rhs[i] != 0.0 {
            let _ = writeln!(out, "    RHS       {:<8}  {:<12}", rname(i), num(lp.rhs[i]));
        }
    }

    let _ = writeln!(out, "BOUNDS");
    for j in 0..n {
        let (l, u) = (lp.lower[j], lp.upper[j]);
        let cn = cname(j);
        if l == u {
            let _ = writeln!(out, " FX BND       {:<8}  {:<12}", cn, num(l));
        } else if l == f64::NEG_INFINITY && u == f64::INFINITY {
            let _ = writeln!(out, " FR BND       {:<8}", cn);
        } else {
            if l == f64::NEG_INFINITY {
                let _ = writeln!(out, " MI BND       {:<8}", cn);
            } else if l != 0.0 {
                let _ = writeln!(out, " LO BND       {:<8}  {:<12}", cn, num(l));
            }
            if u != f64::INFINITY {
                let _ = writeln!(out, " UP BND       {:<8}  {:<12}", cn, num(u));
            }
        }
    }
    let _ = writeln!(out, "ENDATA");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{LinearProgram, RowSense, Sense, INF};

    fn sample_lp() -> LinearProgram {
        let mut lp = LinearProgram::new(Sense::Maximize);
        let x = lp.add_var(2.0, 0.0, 4.0);
        let y = lp.add_var(-1.0, -INF, INF);
        let z = lp.add_var(0.0, 0.0, 1.0);
        lp.add_row(RowSense::Le, 5.0, &[(x, 1.0), (y, 2.5)]);
        lp.add_row(RowSense::Eq, 1.0, &[(y, 1.0), (z, -1.0)]);
        lp.add_row(RowSense::Ge, -2.0, &[(x, -0.5), (z, 3.0)]);
        lp.objective_offset = 1.0;
        lp.name = "sample".to_owned();
        lp
    }

    #[test]
    fn sections_and_order() {
        let text = write_mps_with_binaries(&sample_lp(), &[2]);
        let idx = |s: &str| text.find(s).unwrap_or_else(|| panic!("missing {}", s));
        assert!(idx("NAME") < idx("ROWS"));
        assert!(idx("ROWS") < idx("COLUMNS"));
        assert!(idx("COLUMNS") < idx("RHS"));
        assert!(idx("RHS") < idx("BOUNDS"));
        assert!(idx("BOUNDS") < idx("ENDATA"));
        // model order: R000001 before R000002, C000001 before C000002
        assert!(idx("L  R000001") < idx("E  R000002"));
        assert!(idx("E  R000002") < idx("G  R000003"));
        assert!(idx("C000001") < idx("C000002"));
        // binary column wrapped in markers
        let intorg = idx("INTORG");
        let intend = idx("INTEND");
        let c3 = idx("C000003");
        assert!(intorg < c3 && c3 < intend);
        // offset lands on the objective RHS, negated
        assert!(text.contains("RHS       OBJ       -1"));
    }

    #[test]
    fn deterministic_output() {
        let a = write_mps(&sample_lp());
        let b = write_mps(&sample_lp());
        assert_eq!(a, b);
    }

    #[test]
    fn free_and_fixed_bounds() {
        let text = write_mps(&sample_lp());
        assert!(text.contains(" FR BND       C000002"));
        assert!(text.contains(" UP BND       C000001"));
    }
}
