//! Self-contained matplotlib scripts for the CSV files each command writes.

use std::path::Path;

use radres_core::{Error, Result};

use crate::config::Command;
use crate::output::read_header;

pub fn columns(kind: Command) -> &'static [&'static str] {
    match kind {
        Command::Solve => &["r", "re_u0", "im_u0", "re_u1", "im_u1", "log10_abs_u0", "log10_abs_u1"],
        Command::Norm => &["k", "m", "multiplicity", "norm", "tail_bound"],
        Command::SweepH => &["h", "norm", "h_times_log_norm", "fitted_slope_so_far"],
        Command::SweepM => &["m", "norm", "log_norm_times_h_over_1_plus_sqrt_m"],
        Command::MellinCheck => &["tau", "abs_multiplier", "lambda", "parseval_relerr", "reconstruction_relerr"],
        Command::BesselCheck => &[
            "nu",
            "z",
            "j",
            "y",
            "envelope_ratio_j",
            "envelope_ratio_y",
            "wronskian_relerr",
        ],
    }
}

fn body(kind: Command) -> &'static str {
    match kind {
        Command::Solve => {
            "ax.plot(d['r'], d['log10_abs_u0'], label='log10 |u0|')
ax.plot(d['r'], d['log10_abs_u1'], label='log10 |u1|')
ax.set_xlabel('r')
ax.legend()
"
        }
        Command::Norm => {
            "ok = np.isfinite(d['k'])
ax.semilogy(d['m'][ok], d['norm'][ok], 'o-', label='channel norm')
ax.semilogy(d['m'][ok], d['tail_bound'][ok], 'x:', label='tail bound')
ax.set_xlabel('m')
ax.legend()
"
        }
        Command::SweepH => {
            "ax.loglog(d['h'], d['norm'], 'o-')
ax.set_xlabel('h')
ax.set_ylabel('norm')
ax2 = ax.twinx()
ax2.semilogx(d['h'], d['h_times_log_norm'], 's:', color='gray')
ax2.set_ylabel('h log norm')
"
        }
        Command::SweepM => {
            "ax.plot(d['m'], d['log_norm_times_h_over_1_plus_sqrt_m'], 'o-')
ax.set_xlabel('m')
ax.set_ylabel('h log norm / (1 + sqrt|m|)')
"
        }
        Command::MellinCheck => {
            "ax.plot(d['tau'], d['abs_multiplier'], label='|multiplier|')
ax.plot(d['tau'], d['lambda'], '--', label='Lambda')
ax.set_xlabel('tau')
ax.legend()
"
        }
        Command::BesselCheck => {
            "for nu in np.unique(d['nu']):
    s = d['nu'] == nu
    ax.plot(d['z'][s], d['envelope_ratio_j'][s], label=f'J, nu={nu:g}')
    ax.plot(d['z'][s], d['envelope_ratio_y'][s], '--', label=f'-Y, nu={nu:g}')
ax.set_xlabel('z')
ax.set_ylabel('envelope ratio')
ax.legend(fontsize='small')
"
        }
    }
}

/// Script text for `csv` (as named inside the script) of the given kind.
pub fn plot_script(csv_name: &str, kind: Command) -> String {
    let stem = csv_name.rsplit_once('.').map_or(csv_name, |(s, _)| s);
    format!(
        "import numpy as np
import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt

d = np.genfromtxt({csv:?}, delimiter=',', names=True, skip_header=1)
fig, ax = plt.subplots(figsize=(7, 4.5))
{body}ax.set_title({title:?})
fig.tight_layout()
fig.savefig({png:?}, dpi=150)
",
        csv = csv_name,
        body = body(kind),
        title = kind.name(),
        png = format!("{stem}.png"),
    )
}

/// Checks the CSV's columns against `kind` and writes the script to `out`.
pub fn emit_plot_script(csv: &Path, kind: Command, out: &Path) -> Result<()> {
    let text = std::fs::read_to_string(csv)
        .map_err(|e| Error::Precondition(format!("cannot read {}: {e}", csv.display())))?;
    let (_, cols) = read_header(&text)
        .ok_or_else(|| Error::Parse(format!("{} has no metadata and column header", csv.display())))?;
    if cols != columns(kind) {
        return Err(Error::Parse(format!(
            "{} has columns {cols:?}, expected {:?} for {}",
            csv.display(),
            columns(kind),
            kind.name()
        )));
    }
    let name = csv.file_name().and_then(|s| s.to_str()).unwrap_or("data.csv");
    std::fs::write(out, plot_script(name, kind))
        .map_err(|e| Error::Precondition(format!("cannot write {}: {e}", out.display())))
}
