use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use super::{IoError, FORMAT_VERSION};
use crate::graph::{DualGraph, ItemId, UserId};
use crate::sim::TickReport;

fn create(path: &Path) -> Result<BufWriter<File>, IoError> {
    Ok(BufWriter::new(File::create(path)?))
}

/// Per-node degrees. Item rows leave the user columns empty and vice versa.
pub fn write_snapshot_csv<W: Write>(graph: &DualGraph, mut out: W) -> Result<(), IoError> {
    writeln!(out, "{FORMAT_VERSION} node_kind,id,k_s,k_in,k_out,k_f,k_p")?;
    for u in 0..graph.user_count() as u32 {
        let d = graph.degrees(UserId(u));
        writeln!(out, "user,{u},{},{},{},{},", d.k_s, d.k_in, d.k_out, d.k_f)?;
    }
    for i in 0..graph.item_count() as u32 {
        writeln!(out, "item,{i},,,,,{}", graph.popularity(ItemId(i)))?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_tick_csv<W: Write>(reports: &[TickReport], mut out: W) -> Result<(), IoError> {
    writeln!(
        out,
        "{FORMAT_VERSION} tick,activated,new_users,new_items,social_links,cross_links,failed_walks,triadic_links"
    )?;
    for r in reports {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.tick,
            r.activated,
            r.new_users,
            r.new_items,
            r.social_links,
            r.cross_links,
            r.failed_walks,
            r.triadic_links
        )?;
    }
    out.flush()?;
    Ok(())
}

/// Plot-ready table of equally long numeric columns.
pub fn write_curve_csv<W: Write>(
    names: &[&str],
    columns: &[&[f64]],
    mut out: W,
) -> Result<(), IoError> {
    assert_eq!(names.len(), columns.len(), "one name per column");
    let rows = columns.first().map_or(0, |c| c.len());
    assert!(
        columns.iter().all(|c| c.len() == rows),
        "columns differ in length"
    );
    writeln!(out, "{FORMAT_VERSION} {}", names.join(","))?;
    let mut line = String::new();
    for r in 0..rows {
        line.clear();
        for (k, c) in columns.iter().enumerate() {
            if k > 0 {
                line.push(',');
            }
            let v = c[r];
            if v.is_finite() {
                line.push_str(&v.to_string());
            } else {
                line.push_str("nan");
            }
        }
        writeln!(out, "{line}")?;
    }
    out.flush()?;
    Ok(())
}

/// Pretty JSON with a top-level `"format": "#v1"` entry.
pub fn write_summary_json<T: Serialize>(value: &T, path: &Path) -> Result<(), IoError> {
    #[derive(Serialize)]
    struct Versioned<'a, T> {
        format: &'static str,
        #[serde(flatten)]
        body: &'a T,
    }
    let mut out = create(path)?;
    serde_json::to_writer_pretty(
        &mut out,
        &Versioned {
            format: FORMAT_VERSION,
            body: value,
        },
    )?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}
