//! Named network datasets: download, gzip handling, checksum pinning and
//! the local cache.
//!
//! Upstream files are unversioned, so the first download whose node count
//! matches the published size pins its SHA-256 in `<cache>/<name>.sha256`.
//! Every later use of the cached file is checked against that pin; a
//! mismatching file is moved aside to `<file>.quarantine`.

use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use flate2::read::MultiGzDecoder;
use lvm_core::{build_graph, parse_edge_list, raw_node_ids, Graph};
use sha2::{Digest, Sha256};

const SNAP: &str = "https://snap.stanford.edu/data";

/// Environment variable overriding the default cache directory.
pub const CACHE_ENV: &str = "LVM_CACHE";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetRef {
    pub name: String,
    pub url: String,
    /// File name inside the cache directory.
    pub file_name: String,
    /// Published node count used to verify a fresh download.
    pub expected_nodes: Option<usize>,
    /// Known checksum; when absent the cache pin is used.
    pub sha256: Option<String>,
}

struct Entry {
    name: &'static str,
    file: &'static str,
    nodes: usize,
}

const REGISTRY: &[Entry] = &[
    Entry { name: "wiki-vote", file: "wiki-Vote.txt.gz", nodes: 7115 },
    Entry { name: "enron", file: "email-Enron.txt.gz", nodes: 36692 },
    Entry { name: "slashdot", file: "soc-Slashdot0902.txt.gz", nodes: 82168 },
    Entry { name: "epinions", file: "soc-Epinions1.txt.gz", nodes: 75879 },
    Entry { name: "euemail", file: "email-EuAll.txt.gz", nodes: 265214 },
    Entry { name: "citations", file: "cit-Patents.txt.gz", nodes: 3774768 },
];

pub fn dataset_names() -> impl Iterator<Item = &'static str> {
    REGISTRY.iter().map(|e| e.name)
}

pub fn lookup(name: &str) -> Option<DatasetRef> {
    let key = name.trim().to_ascii_lowercase().replace('_', "-");
    REGISTRY.iter().find(|e| e.name == key).map(|e| DatasetRef {
        name: e.name.to_string(),
        url: format!("{SNAP}/{}", e.file),
        file_name: e.file.to_string(),
        expected_nodes: Some(e.nodes),
        sha256: None,
    })
}

/// `--cache` if given, else `$LVM_CACHE`, else `./data`.
pub fn cache_dir(explicit: Option<&Path>) -> PathBuf {
    match explicit {
        Some(p) => p.to_path_buf(),
        None => std::env::var_os(CACHE_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from("data")),
    }
}

/// Path of the verified cached file, downloading it on a cold cache.
pub fn fetch_dataset(r: &DatasetRef, cache: &Path) -> Result<PathBuf> {
    fs::create_dir_all(cache)
        .with_context(|| format!("creating cache directory {}", cache.display()))?;
    let path = cache.join(&r.file_name);
    let pin_path = cache.join(format!("{}.sha256", r.name));
    let pinned = match &r.sha256 {
        Some(s) => Some(s.to_ascii_lowercase()),
        None => read_pin(&pin_path)?,
    };

    if path.exists() {
        let digest = sha256_file(&path)?;
        match pinned {
            Some(expected) if expected != digest => {
                let q = quarantine(&path)?;
                bail!(
                    "checksum mismatch for {}: expected {expected}, found {digest}; moved to {}",
                    r.name,
                    q.display()
                );
            }
            Some(_) => return Ok(path),
            None => {
                verify_nodes(r, &path)?;
                write_pin(&pin_path, &digest)?;
                return Ok(path);
            }
        }
    }

    let part = cache.join(format!("{}.part", r.file_name));
    download(&r.url, &part).with_context(|| format!("downloading {} from {}", r.name, r.url))?;
    let digest = sha256_file(&part)?;
    if let Some(expected) = pinned.as_deref() {
        if expected != digest {
            let q = quarantine(&part)?;
            bail!(
                "checksum mismatch for downloaded {}: expected {expected}, found {digest}; moved to {}",
                r.name,
                q.display()
            );
        }
    }
    if let Err(e) = verify_nodes(r, &part) {
        quarantine(&part)?;
        return Err(e);
    }
    fs::rename(&part, &path)?;
    if pinned.is_none() {
        write_pin(&pin_path, &digest)?;
    }
    Ok(path)
}

fn download(url: &str, dest: &Path) -> Result<()> {
    let mut response = ureq::get(url).call()?;
    let mut reader = response.body_mut().as_reader();
    let mut out = io::BufWriter::new(File::create(dest)?);
    io::copy(&mut reader, &mut out)?;
    out.flush()?;
    Ok(())
}

fn verify_nodes(r: &DatasetRef, path: &Path) -> Result<()> {
    if let Some(expected) = r.expected_nodes {
        let pairs = read_pairs(path)?;
        let n = raw_node_ids(&pairs).len();
        if n != expected {
            bail!("{} has {n} nodes, expected {expected}", r.name);
        }
    }
    Ok(())
}

fn read_pin(path: &Path) -> Result<Option<String>> {
    match fs::read_to_string(path) {
        Ok(s) => Ok(Some(s.trim().to_ascii_lowercase())),
        Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(e).with_context(|| format!("reading {}", path.display())),
    }
}

fn write_pin(path: &Path, digest: &str) -> Result<()> {
    fs::write(path, format!("{digest}\n")).with_context(|| format!("writing {}", path.display()))
}

fn quarantine(path: &Path) -> Result<PathBuf> {
    let mut name = path.as_os_str().to_owned();
    name.push(".quarantine");
    let q = PathBuf::from(name);
    fs::rename(path, &q).with_context(|| format!("quarantining {}", path.display()))?;
    Ok(q)
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let mut f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut hasher = Sha256::new();
    let mut buf = vec![0u8; 1 << 16];
    loop {
        let k = f.read(&mut buf)?;
        if k == 0 {
            break;
        }
        hasher.update(&buf[..k]);
    }
    Ok(hex::encode(hasher.finalize()))
}

/// Opens an edge list, decompressing gzip transparently.
pub fn open_edge_list(path: &Path) -> Result<Box<dyn BufRead>> {
    let mut f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut magic = [0u8; 2];
    let is_gzip = f.read(&mut magic)? == 2 && magic == [0x1f, 0x8b];
    let f = File::open(path)?;
    Ok(if is_gzip {
        Box::new(BufReader::new(MultiGzDecoder::new(f)))
    } else {
        Box::new(BufReader::new(f))
    })
}

pub fn read_pairs(path: &Path) -> Result<Vec<(i64, i64)>> {
    parse_edge_list(open_edge_list(path)?).with_context(|| format!("parsing {}", path.display()))
}

/// A loaded network with the raw id of every dense node id.
#[derive(Debug, Clone)]
pub struct Network {
    pub graph: Graph,
    pub raw_ids: Vec<i64>,
}

pub fn load_file(path: &Path) -> Result<Network> {
    let pairs = read_pairs(path)?;
    Ok(Network {
        graph: build_graph(&pairs),
        raw_ids: raw_node_ids(&pairs),
    })
}

/// Resolves a dataset name (fetching into `cache` if needed) or an
/// edge-list path.
pub fn load_network(name_or_path: &str, cache: &Path) -> Result<Network> {
    if let Some(r) = lookup(name_or_path) {
        let path = fetch_dataset(&r, cache)?;
        return load_file(&path);
    }
    let path = Path::new(name_or_path);
    if path.exists() {
        return load_file(path);
    }
    bail!(
        "{name_or_path:?} is neither a known dataset ({}) nor an existing file",
        dataset_names().collect::<Vec<_>>().join(", ")
    )
}
