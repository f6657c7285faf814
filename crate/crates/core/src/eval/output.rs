use std::borrow::Cow;
use std::io::{self, Write};

use super::{EvalReport, PredictivenessMatrix, Summary};

pub const RESULTS_HEADER: &str = "network,classifier,features,observed_fraction,run,precision,recall,f";
pub const SUMMARY_HEADER: &str = "network,classifier,features,observed_fraction,runs,\
precision_mean,precision_se,recall_mean,recall_se,f_mean_of_runs,f_se,\
tp,fp,fn,tn,precision_pooled,recall_pooled,f_pooled";

pub const PREDICTIONS_HEADER: &str = "run,classifier,features,node,label,posterior";

fn field(s: &str) -> Cow<'_, str> {
    if s.contains([',', '"', '\n']) {
        Cow::Owned(format!("\"{}\"", s.replace('"', "\"\"")))
    } else {
        Cow::Borrowed(s)
    }
}

/// One line per test run and (classifier, feature set).
pub fn write_results_csv<W: Write>(mut out: W, reports: &[EvalReport]) -> io::Result<()> {
    writeln!(out, "{RESULTS_HEADER}")?;
    for r in reports {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            field(&r.network),
            r.classifier,
            r.features,
            r.observed_fraction,
            r.run,
            r.precision,
            r.recall,
            r.f_measure
        )?;
    }
    Ok(())
}

/// Every per-node prediction of `reports`; `node_label` maps internal node
/// ids to the ids of the input file.
pub fn write_predictions_csv<W: Write>(
    mut out: W,
    reports: &[EvalReport],
    node_label: impl Fn(usize) -> u64,
) -> io::Result<()> {
    writeln!(out, "{PREDICTIONS_HEADER}")?;
    for r in reports {
        for p in &r.predictions {
            let label = if p.infected { "infected" } else { "susceptible" };
            writeln!(
                out,
                "{},{},{},{},{label},{}",
                r.run,
                r.classifier,
                r.features,
                node_label(p.node),
                p.posterior_infected
            )?;
        }
    }
    Ok(())
}

/// Means with standard errors over runs, plus scores of the pooled
/// confusion counts.
pub fn write_summary_csv<W: Write>(mut out: W, summaries: &[Summary]) -> io::Result<()> {
    writeln!(out, "{SUMMARY_HEADER}")?;
    for s in summaries {
        let c = &s.pooled;
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            field(&s.network),
            s.classifier,
            s.features,
            s.observed_fraction,
            s.runs,
            s.precision_mean,
            s.precision_se,
            s.recall_mean,
            s.recall_se,
            s.f_mean,
            s.f_se,
            c.true_positive,
            c.false_positive,
            c.false_negative,
            c.true_negative,
            c.precision(),
            c.recall(),
            c.f_measure()
        )?;
    }
    Ok(())
}

/// Gnuplot data: one block per (classifier, feature set), blocks separated
/// by two blank lines so `index` selects them. Columns are observed
/// fraction, mean precision, mean recall, mean F and the F standard error.
pub fn write_sweep_dat<W: Write>(mut out: W, summaries: &[Summary]) -> io::Result<()> {
    let mut keys: Vec<(String, String)> = Vec::new();
    for s in summaries {
        let key = (s.classifier.to_string(), s.features.to_string());
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    for (block, (classifier, features)) in keys.iter().enumerate() {
        if block > 0 {
            writeln!(out)?;
            writeln!(out)?;
        }
        writeln!(out, "# {classifier} {features}")?;
        writeln!(out, "# observed_fraction precision recall f f_se")?;
        let mut rows: Vec<&Summary> = summaries
            .iter()
            .filter(|s| &s.classifier.to_string() == classifier && &s.features.to_string() == features)
            .collect();
        rows.sort_by(|a, b| a.observed_fraction.total_cmp(&b.observed_fraction));
        for s in rows {
            writeln!(
                out,
                "{} {} {} {} {}",
                s.observed_fraction, s.precision_mean, s.recall_mean, s.f_mean, s.f_se
            )?;
        }
    }
    Ok(())
}

/// `classifier` column followed by one mean-F column per feature.
pub fn write_predictiveness_csv<W: Write>(mut out: W, m: &PredictivenessMatrix) -> io::Result<()> {
    let names: Vec<&str> = m.features.iter().map(|f| f.name()).collect();
    writeln!(out, "network,classifier,{}", names.join(","))?;
    for (kind, row) in m.classifiers.iter().zip(&m.f_mean) {
        let values: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        writeln!(out, "{},{},{}", field(&m.network), kind, values.join(","))?;
    }
    Ok(())
}
