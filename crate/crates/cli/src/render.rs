use std::fmt::Write;

use crate::report::Report;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Tsv,
    Text,
}

impl Format {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Json => "json",
            Self::Tsv => "tsv",
            Self::Text => "text",
        }
    }
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Tsv => tsv(report),
        Format::Text => text(report),
    }
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(ToString::to_string).unwrap_or_default()
}

fn tsv(r: &Report) -> String {
    let mut blocks: Vec<String> = Vec::new();
    let mut s = String::from("key\tvalue\n");
    writeln!(s, "status\t{}", serde_json::to_value(r.status).unwrap().as_str().unwrap()).unwrap();
    writeln!(s, "mode\t{}", r.input.mode).unwrap();
    if let Some(p) = &r.params {
        writeln!(s, "exponents\t{}", p.exponents.iter().map(u64::to_string).collect::<Vec<_>>().join(",")).unwrap();
    }
    if let Some(sf) = &r.seifert {
        for (k, v) in [
            ("d", &sf.d),
            ("m", &sf.m),
            ("fiber_winding", &sf.fiber_winding),
            ("genus", &sf.genus),
            ("minima", &sf.minima),
            ("saddles", &sf.saddles),
        ] {
            writeln!(s, "{k}\t{v}").unwrap();
        }
        if let Some(x) = &sf.s {
            writeln!(s, "s\t{x}").unwrap();
        }
        for o in &sf.orbifold {
            writeln!(s, "family_{}\t{} x {}", o.j, o.count, o.multiplicity).unwrap();
        }
    }
    blocks.push(s);

    if !r.generators.is_empty() {
        let mut s = String::from("label\tkind\titerate\tcz\tgrading\taction\tfiber_class\n");
        for g in &r.generators {
            writeln!(
                s,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                g.label,
                g.kind,
                g.iterate,
                g.cz,
                g.grading,
                g.action,
                opt(&g.fiber_class)
            )
            .unwrap();
        }
        blocks.push(s);
    }
    if !r.differentials.is_empty() {
        let mut s = String::from("class\tgrading\tsource\ttarget\tcoefficient\n");
        for b in &r.differentials {
            for e in &b.entries {
                writeln!(s, "{}\t{}\t{}\t{}\t{}", b.class, b.grading, e.source, e.target, e.coefficient).unwrap();
            }
        }
        blocks.push(s);
    }
    match (&r.homology, &r.oracle) {
        (Some(h), Some(o)) => {
            let mut s = String::from("grading\tchain\toracle\n");
            let mut keys: Vec<i64> = h.dims.keys().chain(o.dims.keys()).copied().collect();
            keys.sort_unstable_by(|a, b| b.cmp(a));
            keys.dedup();
            for k in keys {
                writeln!(s, "{k}\t{}\t{}", h.dims.get(&k).unwrap_or(&0), o.dims.get(&k).unwrap_or(&0)).unwrap();
            }
            blocks.push(s);
        }
        (Some(h), None) => {
            let mut s = String::from("grading\tdimension\n");
            for (k, v) in h.dims.iter().rev() {
                writeln!(s, "{k}\t{v}").unwrap();
            }
            blocks.push(s);
        }
        _ => {}
    }
    let mut checks = Vec::new();
    if let Some(g) = &r.verification.geometry {
        checks.push(("area".into(), Some(g.area_error), Some(g.area_tolerance), g.area_error <= g.area_tolerance));
        checks.push((
            "angles".into(),
            Some(g.max_angle_error),
            Some(g.angle_tolerance),
            g.max_angle_error <= g.angle_tolerance,
        ));
        for rel in &g.relations {
            checks.push((rel.name.clone(), rel.residual, Some(rel.tolerance), rel.passed));
        }
        let inv = &g.invariance;
        checks.push(("lambda invariance".into(), Some(inv.worst_lambda), Some(inv.tolerance), inv.passed));
        checks.push(("frame invariance".into(), Some(inv.worst_frame), Some(inv.tolerance), inv.passed));
    }
    if let Some(d) = &r.verification.dynamics {
        for row in &d.rotation {
            checks.push((
                format!("rotation eps={} T={}", row.epsilon, row.period),
                Some(row.relative_error),
                None,
                row.passed,
            ));
        }
        for row in &d.cz {
            checks.push((format!("cz {}", row.orbit), None, None, row.passed));
        }
    }
    if !checks.is_empty() {
        let mut s = String::from("check\tresidual\ttolerance\tpassed\n");
        for (name, res, tol, ok) in checks {
            writeln!(s, "{name}\t{}\t{}\t{ok}", opt(&res), opt(&tol)).unwrap();
        }
        blocks.push(s);
    }
    if !r.errors.is_empty() {
        let mut s = String::from("error\tmessage\n");
        for e in &r.errors {
            writeln!(s, "{}\t{}", e.kind, e.message).unwrap();
        }
        blocks.push(s);
    }
    blocks.join("\n")
}

fn text(r: &Report) -> String {
    let mut s = String::new();
    match &r.params {
        Some(p) => writeln!(s, "{}  [{}]", p.label, r.input.mode).unwrap(),
        None => writeln!(s, "exponents {:?}  [{}]", r.input.exponents, r.input.mode).unwrap(),
    }
    if let Some(sf) = &r.seifert {
        writeln!(
            s,
            "  d = {}, m = {}, d/m = {}, genus = {}, minima = {}, saddles = {}",
            sf.d, sf.m, sf.fiber_winding, sf.genus, sf.minima, sf.saddles
        )
        .unwrap();
        if let Some(x) = &sf.s {
            writeln!(s, "  s = {x}").unwrap();
        }
        let fams: Vec<String> = sf.orbifold.iter().map(|o| format!("{} x Z/{}", o.count, o.multiplicity)).collect();
        writeln!(s, "  orbifold points: {}", fams.join(", ")).unwrap();
    }
    if !r.generators.is_empty() {
        writeln!(s, "\ngenerators ({}):", r.generators.len()).unwrap();
        for g in &r.generators {
            let class = g.fiber_class.map(|n| format!("  class {n}")).unwrap_or_default();
            writeln!(s, "  {:<16} gr {:>6}  cz {:>6}  action {}{class}", g.label, g.grading, g.cz, g.action).unwrap();
        }
    }
    if !r.differentials.is_empty() {
        writeln!(s, "\ndifferentials:").unwrap();
        for b in &r.differentials {
            if b.entries.is_empty() {
                continue;
            }
            writeln!(s, "  {} grading {} -> {}:", b.class, b.grading, b.grading - 1).unwrap();
            for src in &b.sources {
                let terms: Vec<String> = b
                    .entries
                    .iter()
                    .filter(|e| &e.source == src)
                    .map(|e| format!("{} {}", e.coefficient, e.target))
                    .collect();
                if !terms.is_empty() {
                    writeln!(s, "    d {src} = {}", terms.join(" + ").replace("+ -", "- ")).unwrap();
                }
            }
        }
    }
    if let Some(h) = &r.homology {
        writeln!(s, "\nhomology (gradings >= {}, {} fiber classes):", h.grading_floor, h.fiber_classes).unwrap();
        for (k, v) in h.dims.iter().rev() {
            writeln!(s, "  {k:>6}: {v}").unwrap();
        }
        writeln!(s, "  series: {}", h.series).unwrap();
    }
    if let Some(o) = &r.oracle {
        writeln!(s, "\nclosed form: {}", o.series).unwrap();
        writeln!(s, "  exceptional window total: {}", o.g_block_total).unwrap();
    }
    if let Some(c) = &r.comparison {
        match &c.first_mismatch {
            None => writeln!(s, "\ncomparison: equal at all gradings >= {}", c.grading_floor).unwrap(),
            Some(m) => writeln!(
                s,
                "\ncomparison: MISMATCH at grading {} (chain {}, closed form {})",
                m.grading, m.chain, m.oracle
            )
            .unwrap(),
        }
    }
    if let Some(g) = &r.verification.geometry {
        writeln!(s, "\ngeometry:").unwrap();
        writeln!(s, "  area {:.15} vs {:.15} (error {:.1e})", g.area, g.expected_area, g.area_error).unwrap();
        writeln!(s, "  max angle error {:.1e}", g.max_angle_error).unwrap();
        for rel in &g.relations {
            let res = rel.residual.map(|v| format!("{v:.1e}")).unwrap_or_else(|| "fails".into());
            writeln!(s, "  {:<28} {res:>9}  {}", rel.name, if rel.passed { "ok" } else { "FAIL" }).unwrap();
        }
        let inv = &g.invariance;
        writeln!(
            s,
            "  invariance over {} samples ({}): lambda {:.1e}, frame {:.1e}  {}",
            inv.samples,
            inv.jacobian,
            inv.worst_lambda,
            inv.worst_frame,
            if inv.passed { "ok" } else { "FAIL" }
        )
        .unwrap();
    }
    if let Some(d) = &r.verification.dynamics {
        writeln!(s, "\ndynamics:").unwrap();
        for row in &d.rotation {
            writeln!(
                s,
                "  eps {:<6} T {:>9.4}  analytic {:>12.9}  ode {:>12.9}  rel {:.1e}  det-1 {:.1e}  {}",
                row.epsilon,
                row.period,
                row.analytic_angle,
                row.ode_angle,
                row.relative_error,
                row.determinant - 1.0,
                if row.passed { "ok" } else { "FAIL" }
            )
            .unwrap();
        }
        for row in &d.cz {
            writeln!(
                s,
                "  {:<12} cz {:>5} (formula {:>5})  {}",
                row.orbit,
                opt(&row.cz_measured),
                row.cz_formula,
                if row.passed { "ok" } else { "FAIL" }
            )
            .unwrap();
        }
        writeln!(s, "  contraction residual {:.1e}", d.contraction_worst).unwrap();
    }
    for e in &r.errors {
        writeln!(s, "\nerror: {}: {}", e.kind, e.message).unwrap();
    }
    s
}
