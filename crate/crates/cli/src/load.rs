use std::path::{Path, PathBuf};

use ptk_core::catalog::builtin_scene;
use ptk_core::scene::Scene;

use crate::CliError;

pub const SCENE_PATH_VAR: &str = "PTK_SCENE_PATH";

fn read(path: &Path) -> Result<Scene, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
    Scene::from_json(&text).map_err(|e| CliError::Scene(format!("{}: {e}", path.display())))
}

/// A file path first, then `PTK_SCENE_PATH`, then the built-in list.
pub fn resolve_scene(arg: &str) -> Result<Scene, CliError> {
    let direct = PathBuf::from(arg);
    if direct.is_file() {
        return read(&direct);
    }
    if let Some(dir) = std::env::var_os(SCENE_PATH_VAR) {
        for cand in [arg.to_string(), format!("{arg}.json")] {
            let p = Path::new(&dir).join(cand);
            if p.is_file() {
                return read(&p);
            }
        }
    }
    builtin_scene(arg).ok_or_else(|| CliError::SceneNotFound(arg.to_string()))
}
