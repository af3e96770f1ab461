use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{DplError, Result};

const EXPECTED: [&str; 3] = ["energy.csv", "front.csv", "decay_w*.csv"];

fn energy_script(csv: &str) -> String {
    format!(
        r#"set datafile separator ","
set key autotitle columnhead
set xlabel "t"
set logscale y
set title "energy functionals and continuous-dependence bound"
plot "{csv}" using 1:(sqrt($2)) with lines title "sqrt(E)", \
     "{csv}" using 1:(sqrt($3)) with lines title "sqrt(F)", \
     "{csv}" using 1:5 with lines dashtype 2 title "bound"
pause -1
"#
    )
}

fn front_script(csv: &str) -> String {
    format!(
        r#"set datafile separator ","
set key top left
set xlabel "t"
set ylabel "x"
set title "front position against the speed bound"
plot "{csv}" using 1:2 with linespoints title "front position", \
     "{csv}" using 1:3 with lines dashtype 2 title "c t"
pause -1
"#
    )
}

fn decay_script(csv: &str) -> String {
    format!(
        r#"set datafile separator ","
set xlabel "x3"
set logscale y
set title "decay measure, exponential envelope and lower measure"
plot "{csv}" using 1:2 with lines title "M", \
     "{csv}" using 1:3 with lines dashtype 2 title "M(0) exp(-x3/nu)", \
     "{csv}" using 1:4 with lines dashtype 3 title "M*"
pause -1
"#
    )
}

fn scan(dir: &Path, out: &mut Vec<PathBuf>) -> Result<()> {
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        if path.is_dir() {
            scan(&path, out)?;
        } else if path.extension().is_some_and(|e| e == "csv") {
            out.push(path);
        }
    }
    Ok(())
}

/// Write a gnuplot script next to every energy, front and decay CSV under
/// `dir`. Returns the scripts written.
pub fn emit_plots(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut csvs = Vec::new();
    scan(dir, &mut csvs)?;
    csvs.sort();
    let mut scripts = Vec::new();
    for csv in csvs {
        let name = csv.file_name().and_then(|n| n.to_str()).unwrap_or_default();
        let body = match name {
            "energy.csv" => energy_script(name),
            "front.csv" => front_script(name),
            n if n.starts_with("decay_w") => decay_script(n),
            _ => continue,
        };
        let script = csv.with_extension("gp");
        fs::write(&script, body)?;
        scripts.push(script);
    }
    if scripts.is_empty() {
        return Err(DplError::MissingReports {
            dir: dir.to_path_buf(),
            expected: EXPECTED.iter().map(|s| s.to_string()).collect(),
        });
    }
    Ok(scripts)
}
