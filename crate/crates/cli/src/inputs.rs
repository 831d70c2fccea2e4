use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use qholo_core::qecc::{code_from_json, five_qubit_code, Code};
use qholo_core::toric::{build_code, DefectConfig, ToricCode, ToricDocument, ToricSetup, TorusLattice, DEFAULT_SEPARATION};

use crate::args::{CodeArgs, ToricArgs};
use crate::UsageError;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// A loaded code, plus the toric structure when it came from one.
pub struct LoadedCode {
    pub code: Code,
    pub toric: Option<ToricCode>,
    pub label: String,
}

pub fn load_code(args: &CodeArgs) -> Result<LoadedCode> {
    if let Some(path) = &args.code {
        let code = code_from_json(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
        return Ok(LoadedCode {
            code,
            toric: None,
            label: path.display().to_string(),
        });
    }
    if let Some(path) = &args.toric {
        let setup = load_toric_document(path)?;
        let tc = build_code(&setup.lattice, &setup.config, setup.s)?;
        return Ok(LoadedCode {
            code: tc.code.clone(),
            toric: Some(tc),
            label: path.display().to_string(),
        });
    }
    let name = args.fixture.as_deref().unwrap_or("five-qubit");
    match name {
        "five-qubit" | "fivequbit" => Ok(LoadedCode {
            code: five_qubit_code(),
            toric: None,
            label: "five-qubit".into(),
        }),
        _ => {
            let Some(l) = name.strip_prefix("toric-").and_then(|l| l.parse::<usize>().ok()) else {
                bail!(UsageError(format!("unknown fixture {name:?}")));
            };
            let lat = TorusLattice::new(l)?;
            let tc = build_code(&lat, &DefectConfig::empty(), DEFAULT_SEPARATION)?;
            Ok(LoadedCode {
                code: tc.code.clone(),
                toric: Some(tc),
                label: name.into(),
            })
        }
    }
}

pub fn load_toric_document(path: &Path) -> Result<ToricSetup> {
    let doc = ToricDocument::parse(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    Ok(doc.setup()?)
}

pub fn load_toric(args: &ToricArgs) -> Result<ToricSetup> {
    let mut setup = match (&args.config, args.period) {
        (Some(path), _) => load_toric_document(path)?,
        (None, Some(l)) => ToricSetup {
            lattice: TorusLattice::new(l)?,
            s: DEFAULT_SEPARATION,
            config: DefectConfig::empty(),
            word: Vec::new(),
        },
        (None, None) => bail!(UsageError("either --config or --L is required".into())),
    };
    if let Some(s) = args.separation {
        setup.s = s;
    }
    Ok(setup)
}
