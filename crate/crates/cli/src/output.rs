//! Report envelope shared by every command, rendered as JSON or CSV.

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;
use serde_json::Value;

use qherm_core::geom::POINT_ORDER_VERSION;
use qherm_core::FieldCtx;

use crate::cli::{Format, Opts};
use crate::error::CliResult;

pub const SCHEMA: u32 = 1;

#[derive(Serialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn of(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIPPED",
        }
    }
}

/// Field encoding needed to reproduce every integer in a report.
#[derive(Serialize, Clone, Debug)]
pub struct FieldInfo {
    pub p: u32,
    pub m: u32,
    /// `c0..c(m-1)` of the monic modulus `x^m + ... + c0`.
    pub modulus: Vec<u32>,
    pub point_order: &'static str,
}

impl FieldInfo {
    pub fn of(f: &FieldCtx) -> Self {
        FieldInfo {
            p: f.characteristic(),
            m: f.degree(),
            modulus: f.modulus().to_vec(),
            point_order: POINT_ORDER_VERSION,
        }
    }
}

/// Fixed-column table for `--format csv`.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn row<I: IntoIterator<Item = String>>(&mut self, cells: I) {
        self.rows.push(cells.into_iter().collect());
    }

    /// Two columns from a count map.
    pub fn from_counts(header: &[&'static str], counts: &BTreeMap<u64, u64>) -> Self {
        let mut t = Table::new(header);
        for (k, v) in counts {
            t.row([k.to_string(), v.to_string()]);
        }
        t
    }
}

/// What a command hands back for rendering.
pub struct Outcome {
    pub field: Option<FieldInfo>,
    pub result: Value,
    pub table: Table,
    pub status: Status,
}

#[derive(Serialize)]
struct Envelope<'a> {
    schema: u32,
    command: &'a str,
    field: &'a Option<FieldInfo>,
    seed: u64,
    config: &'a Opts,
    verdict: Status,
    result: &'a Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    timings_ms: Option<&'a Value>,
}

/// Map with integer keys as `[[key, count], ..]`, sorted by key.
pub fn pairs(m: &BTreeMap<u64, u64>) -> Vec<[u64; 2]> {
    m.iter().map(|(&k, &v)| [k, v]).collect()
}

pub fn render(w: &mut dyn Write, command: &str, opts: &Opts, out: &Outcome, timings: Option<&Value>) -> CliResult<()> {
    match opts.format {
        Format::Json => {
            let env = Envelope {
                schema: SCHEMA,
                command,
                field: &out.field,
                seed: opts.seed,
                config: opts,
                verdict: out.status,
                result: &out.result,
                timings_ms: timings,
            };
            serde_json::to_writer_pretty(&mut *w, &env)?;
            writeln!(w)?;
        }
        Format::Csv => {
            writeln!(w, "# schema={SCHEMA} command={command} verdict={}", out.status.label())?;
            match &out.field {
                Some(f) => {
                    let modulus: Vec<String> = f.modulus.iter().map(u32::to_string).collect();
                    writeln!(
                        w,
                        "# p={} m={} modulus={} point_order={} seed={}",
                        f.p,
                        f.m,
                        modulus.join(" "),
                        f.point_order,
                        opts.seed
                    )?;
                }
                None => writeln!(w, "# point_order={} seed={}", POINT_ORDER_VERSION, opts.seed)?,
            }
            writeln!(w, "# config={}", serde_json::to_string(opts)?)?;
            let mut csv = csv::Writer::from_writer(&mut *w);
            csv.write_record(&out.table.header)?;
            for r in &out.table.rows {
                csv.write_record(r)?;
            }
            csv.flush()?;
        }
    }
    Ok(())
}
