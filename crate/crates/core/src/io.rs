//! CSV serialization of ensembles, summaries and static-coupling samples.
//!
//! Floats are written in shortest round-trip exponent form so that equal
//! values always produce equal bytes.

use std::io::{self, Write};

use crate::estimators::SummaryRow;
use crate::sim::PathEnsemble;
use crate::static_coupling::StaticJointSample;

fn header<W: Write>(w: &mut W, comment: Option<&str>, columns: &str) -> io::Result<()> {
    if let Some(c) = comment {
        writeln!(w, "# {c}")?;
    }
    writeln!(w, "{columns}")
}

/// Columns `checkpoint_time,path_id,R2,Z,V,QV`, checkpoint-major.
pub fn write_ensemble_csv<W: Write>(
    e: &PathEnsemble,
    w: &mut W,
    comment: Option<&str>,
) -> io::Result<()> {
    header(w, comment, "checkpoint_time,path_id,R2,Z,V,QV")?;
    for (k, t) in e.checkpoints.iter().enumerate() {
        for (i, p) in e.paths.iter().enumerate() {
            let s = p.samples[k];
            writeln!(w, "{t:e},{i},{:e},{:e},{:e},{:e}", s.r2, s.z, s.v, s.qv)?;
        }
    }
    Ok(())
}

/// Columns `checkpoint_time,stat_name,estimate,stderr,n_paths`.
pub fn write_summary_csv<W: Write>(
    rows: &[SummaryRow],
    w: &mut W,
    comment: Option<&str>,
) -> io::Result<()> {
    header(w, comment, "checkpoint_time,stat_name,estimate,stderr,n_paths")?;
    for r in rows {
        writeln!(
            w,
            "{:e},{},{:e},{:e},{}",
            r.checkpoint_time, r.stat_name, r.estimate, r.stderr, r.n_paths
        )?;
    }
    Ok(())
}

/// Columns `sample_id,X,Y,Z,X′,Y′,Z′,cost` (first horizontal pair only in
/// ℍₙ for n > 1).
pub fn write_joint_csv<W: Write>(
    samples: &[StaticJointSample],
    w: &mut W,
    comment: Option<&str>,
) -> io::Result<()> {
    header(w, comment, "sample_id,X,Y,Z,X′,Y′,Z′,cost")?;
    for (i, s) in samples.iter().enumerate() {
        let (l, r) = (s.left.horizontal(), s.right.horizontal());
        writeln!(
            w,
            "{i},{:e},{:e},{:e},{:e},{:e},{:e},{:e}",
            l[0],
            l[1],
            s.left.vertical(),
            r[0],
            r[1],
            s.right.vertical(),
            s.cost
        )?;
    }
    Ok(())
}
