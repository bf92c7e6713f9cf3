// Copyright 2026 The pmst Contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Reading `.mps`, `.gty` and `.lty` files.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use pmst_core::{parse_global_type, parse_local_type, parse_process, GlobalType, LocalType, ParseError, Process};

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    /// Rendered as `file:line:col: message`.
    #[error("{}:{error}", path.display())]
    Parse { path: PathBuf, error: ParseError },
    #[error("{}: annotation \"{annotation}\": {source}", path.display())]
    Annotation {
        path: PathBuf,
        annotation: String,
        source: Box<LoadError>,
    },
}

fn read(path: &Path) -> Result<String, LoadError> {
    fs::read_to_string(path).map_err(|source| LoadError::Io { path: path.to_path_buf(), source })
}

fn parsed<T>(path: &Path, r: Result<T, ParseError>) -> Result<T, LoadError> {
    r.map_err(|error| LoadError::Parse { path: path.to_path_buf(), error })
}

pub fn load_global(path: &Path) -> Result<GlobalType, LoadError> {
    parsed(path, parse_global_type(&read(path)?))
}

pub fn load_local(path: &Path) -> Result<LocalType, LoadError> {
    parsed(path, parse_local_type(&read(path)?))
}

/// Parses a process without touching its annotation paths.
pub fn load_process(path: &Path) -> Result<Process, LoadError> {
    parsed(path, parse_process(&read(path)?))
}

/// Parses a system and replaces every `new s : "file.gty"` annotation by
/// the global type in that file, relative to the system's directory.
pub fn load_system(path: &Path) -> Result<Process, LoadError> {
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    resolve(path, load_process(path)?, &mut |rel| load_global(&dir.join(rel)))
}

/// Resolves annotation paths of `p`, read from `path`, through `load`.
pub fn resolve(
    path: &Path,
    p: Process,
    load: &mut dyn FnMut(&str) -> Result<GlobalType, LoadError>,
) -> Result<Process, LoadError> {
    p.resolve_annotations(&mut |rel| {
        load(rel).map_err(|e| LoadError::Annotation {
            path: path.to_path_buf(),
            annotation: rel.to_string(),
            source: Box::new(e),
        })
    })
}
