use super::ClassificationReport;

pub fn table_header() -> Vec<&'static str> {
    vec![
        "ring", "|R|", "|J|", "local", "R/J simple", "k", "P_i (size^r)", "flats", "projs", "frees", "I", "II", "III",
        "IV", "categorical", "proj=free",
    ]
}

fn yn(b: bool) -> String {
    if b { "yes" } else { "no" }.to_string()
}

fn size(s: Option<usize>) -> String {
    s.map_or_else(|| "inf".to_string(), |s| s.to_string())
}

pub fn table_row(r: &ClassificationReport) -> Vec<String> {
    let parts: Vec<String> =
        r.indecomposables.iter().map(|p| format!("{}^{}", size(p.size), p.multiplicity)).collect();
    vec![
        r.ring_label.clone(),
        size(r.carrier_size),
        size(r.radical_size),
        yn(r.is_local),
        yn(r.r_mod_j_simple),
        r.k.to_string(),
        parts.join(","),
        yn(r.flats_elementary),
        yn(r.projectives_elementary),
        yn(r.frees_elementary),
        r.property_i.as_str().to_string(),
        r.property_ii.as_str().to_string(),
        r.property_iii.as_str().to_string(),
        r.property_iv.as_str().to_string(),
        yn(r.categorical),
        yn(r.projective_equals_free),
    ]
}

/// Aligned plain-text table, one row per report.
pub fn report_table(reports: &[ClassificationReport]) -> String {
    let mut rows: Vec<Vec<String>> = vec![table_header().into_iter().map(String::from).collect()];
    rows.extend(reports.iter().map(table_row));
    let widths: Vec<usize> =
        (0..rows[0].len()).map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for row in &rows {
        let cells: Vec<String> = row.iter().zip(&widths).map(|(cell, &w)| format!("{cell:<w$}")).collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}
