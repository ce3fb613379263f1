//! Figure recipes shipped with the binary.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Recipe {
    pub name: &'static str,
    pub description: &'static str,
    /// The JSON configuration document.
    pub config: &'static str,
}

macro_rules! recipe {
    ($name:literal, $description:literal) => {
        Recipe { name: $name, description: $description, config: include_str!(concat!("../recipes/", $name, ".json")) }
    };
}

pub const RECIPES: &[Recipe] = &[
    recipe!("appC", "three-mode ring: closed-form eigenvalues against the numeric GGM, one period"),
    recipe!("fig2a_nn_s05", "four modes, nearest-neighbour coupling, s = 0.5: GGM vs J"),
    recipe!("fig2a_nn_s1", "four modes, nearest-neighbour coupling, s = 1: GGM vs J"),
    recipe!("fig2a_nnn_s05", "four modes, NN + NNN coupling, s = 0.5: GGM vs J"),
    recipe!("fig2a_nnn_s1", "four modes, NN + NNN coupling, s = 1: GGM vs J"),
    recipe!("fig2b", "four modes, s = 1: GGM vs NNN strength n at J = 0.5, 1, 2, 4"),
    recipe!("fig2c_nn_s05", "four modes, nearest-neighbour coupling, s = 0.5: accumulated GGM vs J0"),
    recipe!("fig2c_nn_s1", "four modes, nearest-neighbour coupling, s = 1: accumulated GGM vs J0"),
    recipe!("fig2c_nnn_s05", "four modes, NN + NNN coupling, s = 0.5: accumulated GGM vs J0"),
    recipe!("fig2c_nnn_s1", "four modes, NN + NNN coupling, s = 1: accumulated GGM vs J0"),
    recipe!("fig3a_nn", "six modes, nearest-neighbour coupling: GGM vs J"),
    recipe!("fig3a_nnn", "six modes, coupling up to range 2: GGM vs J"),
    recipe!("fig3a_nnnn", "six modes, coupling up to range 3: GGM vs J"),
    recipe!("fig3b_nn", "six modes, nearest-neighbour coupling: accumulated GGM vs J0"),
    recipe!("fig3b_nnn", "six modes, coupling up to range 2: accumulated GGM vs J0"),
    recipe!("fig3b_nnnn", "six modes, coupling up to range 3: accumulated GGM vs J0"),
    recipe!("fig4", "all-equal ring, N = 4..20: period-averaged and peak GGM"),
    recipe!("fig5a", "four-mode all-equal ring: quenched GGM vs mean coupling for several sigma"),
    recipe!("fig5b", "all-equal ring, N = 4..12: breached GGM for several sigma"),
    recipe!("fig6a", "40 modes, nearest-neighbour coupling: block entropy vs block length"),
    recipe!("fig6b", "40 modes, all-equal coupling: block entropy vs block length"),
];

pub fn find(name: &str) -> Option<&'static Recipe> {
    RECIPES.iter().find(|r| r.name == name)
}

/// Writes every recipe to `dir` as `<name>.json`.
pub fn write_all(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.to_path_buf(), source })?;
    RECIPES
        .iter()
        .map(|r| {
            let path = dir.join(format!("{}.json", r.name));
            fs::write(&path, r.config).map_err(|source| CliError::Io { path: path.clone(), source })?;
            Ok(path)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    #[test]
    fn every_recipe_validates() {
        for r in RECIPES {
            let config = parse_config(r.config).unwrap_or_else(|e| panic!("{}: {e}", r.name));
            config.validate().unwrap_or_else(|e| panic!("{}: {e}", r.name));
        }
    }

    #[test]
    fn names_are_unique() {
        let mut names: Vec<&str> = RECIPES.iter().map(|r| r.name).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), RECIPES.len());
        assert!(find("fig4").is_some() && find("fig9").is_none());
    }
}
