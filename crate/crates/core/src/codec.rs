//! Label files, text and binary.
//!
//! Text: a header line `CFML1 dist n=<n>` (or `CFMR1 rout n=<n>`), then one
//! line per vertex:
//!
//! ```text
//! dist line  := id " ncad{" depth ";" entries "} levels[" drec* "]"
//! drec       := "{" centroid "," dist "," g1 "." g2 (";" dslot)* "}"
//! dslot      := panel "/" dist "/" entries
//! rout line  := id " ncad{" depth ";" entries "} levels[" rrec* "]"
//! rrec       := "{" centroid "," to "," from "," dist "," g1 "." g2 (";" rslot)* "}"
//! rslot      := panel "/" dist "/" port "/" twin "/" entries "/" rentries
//! entries    := (sep ":" dist ("," sep ":" dist)*)?
//! rentries   := (sep ":" to ":" from ("," sep ":" to ":" from)*)?
//! ```
//!
//! `g1.g2` are the two star-label slots (0 for absent); records at the
//! centroid carry no slots, all others carry exactly two.
//!
//! Binary: the 5-byte magic (`CFML1` or `CFMR1`), the vertex count as a
//! LEB128 varint, then per vertex a varint byte length followed by the
//! record. Records hold the same fields as the text form in the same order,
//! every integer as a varint, with entry lists prefixed by their length and
//! slots present iff `g1 != 0`. Label size in bits is 8 × record length.

use std::fmt::Write as _;

use crate::dist::{DistLabel, DistLevel, DistSlot};
use crate::error::{Error, Result};
use crate::rout::{RoutLabel, RoutLevel, RoutSlot};
use crate::star::StarLabel;
use crate::tree::{TreeDistLabel, TreeRoutEntry, TreeRoutLabel};

/// Which label file a byte stream or text holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LabelKind {
    Dist,
    Rout,
}

impl LabelKind {
    pub fn magic(self) -> &'static str {
        match self {
            LabelKind::Dist => "CFML1",
            LabelKind::Rout => "CFMR1",
        }
    }

    fn word(self) -> &'static str {
        match self {
            LabelKind::Dist => "dist",
            LabelKind::Rout => "rout",
        }
    }

    /// Detects the kind of a label file from its first bytes.
    pub fn sniff(bytes: &[u8]) -> Option<LabelKind> {
        [LabelKind::Dist, LabelKind::Rout]
            .into_iter()
            .find(|k| bytes.starts_with(k.magic().as_bytes()))
    }
}

/// A label type with a text line and a binary record form.
pub trait LabelCodec: Sized {
    const KIND: LabelKind;
    fn write_record(&self, out: &mut Vec<u8>);
    fn read_record(r: &mut Reader<'_>) -> Result<Self>;
    fn write_line(&self, out: &mut String);
    fn parse_line(c: &mut Cursor<'_>) -> Result<Self>;
}

fn put(out: &mut Vec<u8>, mut x: u64) {
    loop {
        let byte = (x & 0x7f) as u8;
        x >>= 7;
        if x == 0 {
            out.push(byte);
            return;
        }
        out.push(byte | 0x80);
    }
}

/// Varint reader over a byte slice.
pub struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, pos: 0 }
    }

    fn get(&mut self) -> Result<u64> {
        let mut x = 0u64;
        for shift in (0..64).step_by(7) {
            let byte = *self
                .bytes
                .get(self.pos)
                .ok_or_else(|| Error::Format("truncated varint".into()))?;
            self.pos += 1;
            x |= u64::from(byte & 0x7f) << shift;
            if byte & 0x80 == 0 {
                return Ok(x);
            }
        }
        Err(Error::Format("overlong varint".into()))
    }

    fn get32(&mut self) -> Result<u32> {
        u32::try_from(self.get()?).map_err(|_| Error::Format("value exceeds 32 bits".into()))
    }

    fn len(&mut self) -> Result<usize> {
        let n = self.get()? as usize;
        if n > self.bytes.len() - self.pos {
            return Err(Error::Format("length exceeds remaining input".into()));
        }
        Ok(n)
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.bytes.len());
        let end = end.ok_or_else(|| Error::Format("truncated record".into()))?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn done(&self) -> bool {
        self.pos == self.bytes.len()
    }
}

fn put_gate(out: &mut Vec<u8>, g: StarLabel) {
    let [a, b] = g.slots();
    put(out, a.into());
    put(out, b.into());
}

fn get_gate(r: &mut Reader<'_>) -> Result<StarLabel> {
    let slots = [r.get32()?, r.get32()?];
    StarLabel::from_slots(slots).ok_or_else(|| Error::Format(format!("bad star label {slots:?}")))
}

fn put_tree(out: &mut Vec<u8>, t: &TreeDistLabel) {
    put(out, t.entries.len() as u64);
    for &(s, d) in &t.entries {
        put(out, s.into());
        put(out, d.into());
    }
}

fn get_tree(r: &mut Reader<'_>) -> Result<TreeDistLabel> {
    let k = r.len()?;
    let entries = (0..k).map(|_| Ok((r.get32()?, r.get32()?))).collect::<Result<_>>()?;
    Ok(TreeDistLabel { entries, depth: None })
}

fn put_rtree(out: &mut Vec<u8>, t: &TreeRoutLabel) {
    put(out, t.entries.len() as u64);
    for e in &t.entries {
        put(out, e.sep.into());
        put(out, e.port_to_sep.into());
        put(out, e.port_from_sep.into());
    }
}

fn get_rtree(r: &mut Reader<'_>) -> Result<TreeRoutLabel> {
    let k = r.len()?;
    let entries = (0..k)
        .map(|_| {
            Ok(TreeRoutEntry {
                sep: r.get32()?,
                port_to_sep: r.get32()?,
                port_from_sep: r.get32()?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(TreeRoutLabel { entries })
}

fn put_ncad(out: &mut Vec<u8>, t: &TreeDistLabel) {
    put(out, t.depth.map_or(0, |d| u64::from(d) + 1));
    put_tree(out, t);
}

fn get_ncad(r: &mut Reader<'_>) -> Result<TreeDistLabel> {
    let depth = match r.get32()? {
        0 => None,
        d => Some(d - 1),
    };
    let mut t = get_tree(r)?;
    t.depth = depth;
    Ok(t)
}

fn get_slots<S>(
    r: &mut Reader<'_>,
    gate: StarLabel,
    one: impl Fn(&mut Reader<'_>) -> Result<S>,
) -> Result<Option<[S; 2]>> {
    if gate.is_empty() {
        return Ok(None);
    }
    let a = one(r)?;
    let b = one(r)?;
    Ok(Some([a, b]))
}

impl LabelCodec for DistLabel {
    const KIND: LabelKind = LabelKind::Dist;

    fn write_record(&self, out: &mut Vec<u8>) {
        put(out, self.id.into());
        put_ncad(out, &self.ncad);
        put(out, self.levels.len() as u64);
        for l in &self.levels {
            put(out, l.centroid.into());
            put(out, l.dist.into());
            put_gate(out, l.gate);
            for s in l.slots.iter().flatten() {
                put(out, s.panel.into());
                put(out, s.dist.into());
                put_tree(out, &s.tree);
            }
        }
    }

    fn read_record(r: &mut Reader<'_>) -> Result<Self> {
        let id = r.get32()?;
        let ncad = get_ncad(r)?;
        let k = r.len()?;
        let mut levels = Vec::with_capacity(k);
        for _ in 0..k {
            let centroid = r.get32()?;
            let dist = r.get32()?;
            let gate = get_gate(r)?;
            let slots = get_slots(r, gate, |r| {
                Ok(DistSlot {
                    panel: r.get32()?,
                    dist: r.get32()?,
                    tree: get_tree(r)?,
                })
            })?;
            levels.push(DistLevel {
                centroid,
                dist,
                gate,
                slots,
            });
        }
        Ok(DistLabel { id, ncad, levels })
    }

    fn write_line(&self, out: &mut String) {
        let _ = write!(out, "{} ", self.id);
        write_ncad(out, &self.ncad);
        out.push_str(" levels[");
        for l in &self.levels {
            let [a, b] = l.gate.slots();
            let _ = write!(out, "{{{},{},{a}.{b}", l.centroid, l.dist);
            for s in l.slots.iter().flatten() {
                let _ = write!(out, ";{}/{}/", s.panel, s.dist);
                write_entries(out, &s.tree);
            }
            out.push('}');
        }
        out.push(']');
    }

    fn parse_line(c: &mut Cursor<'_>) -> Result<Self> {
        let id = c.num()?;
        c.expect(" ")?;
        let ncad = parse_ncad(c)?;
        c.expect(" levels[")?;
        let mut levels = Vec::new();
        while c.eat("{") {
            let centroid = c.num()?;
            c.expect(",")?;
            let dist = c.num()?;
            c.expect(",")?;
            let gate = parse_gate(c)?;
            let slots = parse_slots(c, gate, |c| {
                let panel = c.num()?;
                c.expect("/")?;
                let dist = c.num()?;
                c.expect("/")?;
                let tree = parse_entries(c)?;
                Ok(DistSlot { panel, tree, dist })
            })?;
            c.expect("}")?;
            levels.push(DistLevel {
                centroid,
                dist,
                gate,
                slots,
            });
        }
        c.expect("]")?;
        Ok(DistLabel { id, ncad, levels })
    }
}

impl LabelCodec for RoutLabel {
    const KIND: LabelKind = LabelKind::Rout;

    fn write_record(&self, out: &mut Vec<u8>) {
        put(out, self.id.into());
        put_ncad(out, &self.ncad);
        put(out, self.levels.len() as u64);
        for l in &self.levels {
            put(out, l.centroid.into());
            put(out, l.port_to_centroid.into());
            put(out, l.port_from_centroid.into());
            put(out, l.dist.into());
            put_gate(out, l.gate);
            for s in l.slots.iter().flatten() {
                put(out, s.panel.into());
                put(out, s.dist.into());
                put(out, s.port.into());
                put(out, s.twin_port.into());
                put_tree(out, &s.dist_tree);
                put_rtree(out, &s.rout_tree);
            }
        }
    }

    fn read_record(r: &mut Reader<'_>) -> Result<Self> {
        let id = r.get32()?;
        let ncad = get_ncad(r)?;
        let k = r.len()?;
        let mut levels = Vec::with_capacity(k);
        for _ in 0..k {
            let centroid = r.get32()?;
            let port_to_centroid = r.get32()?;
            let port_from_centroid = r.get32()?;
            let dist = r.get32()?;
            let gate = get_gate(r)?;
            let slots = get_slots(r, gate, |r| {
                Ok(RoutSlot {
                    panel: r.get32()?,
                    dist: r.get32()?,
                    port: r.get32()?,
                    twin_port: r.get32()?,
                    dist_tree: get_tree(r)?,
                    rout_tree: get_rtree(r)?,
                })
            })?;
            levels.push(RoutLevel {
                centroid,
                port_to_centroid,
                port_from_centroid,
                gate,
                dist,
                slots,
            });
        }
        Ok(RoutLabel { id, ncad, levels })
    }

    fn write_line(&self, out: &mut String) {
        let _ = write!(out, "{} ", self.id);
        write_ncad(out, &self.ncad);
        out.push_str(" levels[");
        for l in &self.levels {
            let [a, b] = l.gate.slots();
            let _ = write!(
                out,
                "{{{},{},{},{},{a}.{b}",
                l.centroid, l.port_to_centroid, l.port_from_centroid, l.dist
            );
            for s in l.slots.iter().flatten() {
                let _ = write!(out, ";{}/{}/{}/{}/", s.panel, s.dist, s.port, s.twin_port);
                write_entries(out, &s.dist_tree);
                out.push('/');
                for (i, e) in s.rout_tree.entries.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    let _ = write!(out, "{}:{}:{}", e.sep, e.port_to_sep, e.port_from_sep);
                }
            }
            out.push('}');
        }
        out.push(']');
    }

    fn parse_line(c: &mut Cursor<'_>) -> Result<Self> {
        let id = c.num()?;
        c.expect(" ")?;
        let ncad = parse_ncad(c)?;
        c.expect(" levels[")?;
        let mut levels = Vec::new();
        while c.eat("{") {
            let centroid = c.num()?;
            c.expect(",")?;
            let port_to_centroid = c.num()?;
            c.expect(",")?;
            let port_from_centroid = c.num()?;
            c.expect(",")?;
            let dist = c.num()?;
            c.expect(",")?;
            let gate = parse_gate(c)?;
            let slots = parse_slots(c, gate, |c| {
                let panel = c.num()?;
                c.expect("/")?;
                let dist = c.num()?;
                c.expect("/")?;
                let port = c.num()?;
                c.expect("/")?;
                let twin_port = c.num()?;
                c.expect("/")?;
                let dist_tree = parse_entries(c)?;
                c.expect("/")?;
                let mut entries = Vec::new();
                while c.peek_digit() {
                    let sep = c.num()?;
                    c.expect(":")?;
                    let port_to_sep = c.num()?;
                    c.expect(":")?;
                    let port_from_sep = c.num()?;
                    entries.push(TreeRoutEntry {
                        sep,
                        port_to_sep,
                        port_from_sep,
                    });
                    if !c.eat(",") {
                        break;
                    }
                }
                Ok(RoutSlot {
                    panel,
                    dist_tree,
                    rout_tree: TreeRoutLabel { entries },
                    port,
                    dist,
                    twin_port,
                })
            })?;
            c.expect("}")?;
            levels.push(RoutLevel {
                centroid,
                port_to_centroid,
                port_from_centroid,
                gate,
                dist,
                slots,
            });
        }
        c.expect("]")?;
        Ok(RoutLabel { id, ncad, levels })
    }
}

/// Binary record of one label, as counted by [`label_bits`].
pub fn record_bytes<L: LabelCodec>(label: &L) -> Vec<u8> {
    let mut out = Vec::new();
    label.write_record(&mut out);
    out
}

/// Size of a label in bits.
pub fn label_bits<L: LabelCodec>(label: &L) -> usize {
    8 * record_bytes(label).len()
}

pub fn to_binary<L: LabelCodec>(labels: &[L]) -> Vec<u8> {
    let mut out = L::KIND.magic().as_bytes().to_vec();
    put(&mut out, labels.len() as u64);
    let mut rec = Vec::new();
    for l in labels {
        rec.clear();
        l.write_record(&mut rec);
        put(&mut out, rec.len() as u64);
        out.extend_from_slice(&rec);
    }
    out
}

pub fn from_binary<L: LabelCodec>(bytes: &[u8]) -> Result<Vec<L>> {
    let magic = L::KIND.magic().as_bytes();
    let body = bytes
        .strip_prefix(magic)
        .ok_or_else(|| Error::Format(format!("missing magic {}", L::KIND.magic())))?;
    let mut r = Reader::new(body);
    let n = r.get()? as usize;
    let mut labels = Vec::with_capacity(n.min(body.len()));
    for i in 0..n {
        let len = r.len()?;
        let mut rec = Reader::new(r.take(len)?);
        let label = L::read_record(&mut rec)?;
        if !rec.done() {
            return Err(Error::Format(format!("trailing bytes in record {i}")));
        }
        labels.push(label);
    }
    if !r.done() {
        return Err(Error::Format("trailing bytes after last record".into()));
    }
    Ok(labels)
}

pub fn to_text<L: LabelCodec>(labels: &[L]) -> String {
    let mut out = format!("{} {} n={}\n", L::KIND.magic(), L::KIND.word(), labels.len());
    for l in labels {
        l.write_line(&mut out);
        out.push('\n');
    }
    out
}

pub fn from_text<L: LabelCodec>(text: &str) -> Result<Vec<L>> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let bad = |line: usize, msg: String| Error::Parse { line: line + 1, msg };
    let (hl, header) = lines.next().ok_or_else(|| bad(0, "empty label file".into()))?;
    let want = format!("{} {} n=", L::KIND.magic(), L::KIND.word());
    let n: usize = header
        .trim()
        .strip_prefix(&want)
        .and_then(|rest| rest.parse().ok())
        .ok_or_else(|| bad(hl, format!("expected header {want}<n>")))?;
    let mut labels = Vec::with_capacity(n);
    for (i, line) in lines {
        let mut c = Cursor::new(line.trim());
        let label = L::parse_line(&mut c).map_err(|e| bad(i, format!("{e} at column {}", c.pos + 1)))?;
        if !c.rest().is_empty() {
            return Err(bad(i, format!("trailing text {:?}", c.rest())));
        }
        labels.push(label);
    }
    if labels.len() != n {
        return Err(bad(hl, format!("header announces {n} labels, found {}", labels.len())));
    }
    Ok(labels)
}

/// Position in a text label line.
pub struct Cursor<'a> {
    s: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(s: &'a str) -> Self {
        Self { s, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.s[self.pos..]
    }

    fn eat(&mut self, tok: &str) -> bool {
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(Error::Format(format!("expected {tok:?}")))
        }
    }

    fn peek_digit(&self) -> bool {
        self.rest().starts_with(|c: char| c.is_ascii_digit())
    }

    fn num(&mut self) -> Result<u32> {
        let len = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if len == 0 {
            return Err(Error::Format("expected a number".into()));
        }
        let v = self.rest()[..len]
            .parse()
            .map_err(|_| Error::Format("number out of range".into()))?;
        self.pos += len;
        Ok(v)
    }
}

fn write_entries(out: &mut String, t: &TreeDistLabel) {
    for (i, (s, d)) in t.entries.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "{s}:{d}");
    }
}

fn write_ncad(out: &mut String, t: &TreeDistLabel) {
    match t.depth {
        Some(d) => {
            let _ = write!(out, "ncad{{{d};");
        }
        None => out.push_str("ncad{-;"),
    }
    write_entries(out, t);
    out.push('}');
}

fn parse_entries(c: &mut Cursor<'_>) -> Result<TreeDistLabel> {
    let mut entries = Vec::new();
    while c.peek_digit() {
        let s = c.num()?;
        c.expect(":")?;
        entries.push((s, c.num()?));
        if !c.eat(",") {
            break;
        }
    }
    Ok(TreeDistLabel { entries, depth: None })
}

fn parse_ncad(c: &mut Cursor<'_>) -> Result<TreeDistLabel> {
    c.expect("ncad{")?;
    let depth = if c.eat("-") { None } else { Some(c.num()?) };
    c.expect(";")?;
    let mut t = parse_entries(c)?;
    c.expect("}")?;
    t.depth = depth;
    Ok(t)
}

fn parse_gate(c: &mut Cursor<'_>) -> Result<StarLabel> {
    let a = c.num()?;
    c.expect(".")?;
    let b = c.num()?;
    StarLabel::from_slots([a, b]).ok_or_else(|| Error::Format(format!("bad star label {a}.{b}")))
}

fn parse_slots<S>(
    c: &mut Cursor<'_>,
    gate: StarLabel,
    one: impl Fn(&mut Cursor<'_>) -> Result<S>,
) -> Result<Option<[S; 2]>> {
    if gate.is_empty() {
        return Ok(None);
    }
    c.expect(";")?;
    let a = one(c)?;
    c.expect(";")?;
    let b = one(c)?;
    Ok(Some([a, b]))
}

/// On-disk encoding of a label file.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FileFormat {
    Text,
    Binary,
}

/// A whole label file of either kind, as loaded from disk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LabelSet {
    Dist(Vec<DistLabel>),
    Rout(Vec<RoutLabel>),
}

impl LabelSet {
    /// Parses a label file, detecting kind and format. Label `i` must
    /// belong to vertex `i`.
    pub fn load(bytes: &[u8]) -> Result<Self> {
        let kind = LabelKind::sniff(bytes).ok_or_else(|| Error::Format("not a label file (bad magic)".into()))?;
        let text_header = format!("{} {} ", kind.magic(), kind.word());
        let is_text = bytes.starts_with(text_header.as_bytes());
        let text = || std::str::from_utf8(bytes).map_err(|_| Error::Format("label text is not UTF-8".into()));
        let set = match (kind, is_text) {
            (LabelKind::Dist, true) => LabelSet::Dist(from_text(text()?)?),
            (LabelKind::Dist, false) => LabelSet::Dist(from_binary(bytes)?),
            (LabelKind::Rout, true) => LabelSet::Rout(from_text(text()?)?),
            (LabelKind::Rout, false) => LabelSet::Rout(from_binary(bytes)?),
        };
        let ids: Vec<u32> = match &set {
            LabelSet::Dist(l) => l.iter().map(|l| l.id).collect(),
            LabelSet::Rout(l) => l.iter().map(|l| l.id).collect(),
        };
        if let Some(i) = ids.iter().enumerate().position(|(i, &id)| id as usize != i) {
            return Err(Error::Format(format!("label {i} carries id {}", ids[i])));
        }
        Ok(set)
    }

    pub fn save(&self, format: FileFormat) -> Vec<u8> {
        match (self, format) {
            (LabelSet::Dist(l), FileFormat::Text) => to_text(l).into_bytes(),
            (LabelSet::Dist(l), FileFormat::Binary) => to_binary(l),
            (LabelSet::Rout(l), FileFormat::Text) => to_text(l).into_bytes(),
            (LabelSet::Rout(l), FileFormat::Binary) => to_binary(l),
        }
    }

    pub fn kind(&self) -> LabelKind {
        match self {
            LabelSet::Dist(_) => LabelKind::Dist,
            LabelSet::Rout(_) => LabelKind::Rout,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            LabelSet::Dist(l) => l.len(),
            LabelSet::Rout(l) => l.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Distance (dist labels) or port (rout labels) from `u` toward `v`.
    pub fn query(&self, u: u32, v: u32) -> Result<u32> {
        let check = |x: u32| {
            if (x as usize) < self.len() {
                Ok(x as usize)
            } else {
                Err(Error::InvalidVertex(x))
            }
        };
        let (u, v) = (check(u)?, check(v)?);
        match self {
            LabelSet::Dist(l) => crate::dist::dist_decode(&l[u], &l[v]),
            LabelSet::Rout(l) => crate::rout::rout_decode(&l[u], &l[v]),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::EncodeOptions;
    use crate::generators::{gen_grid, path_tree};
    use crate::rout::encode_labels;

    #[test]
    fn label_set_detects_kind_and_format() {
        // n = 32 puts a space right after the binary magic.
        let g = gen_grid(8, 4);
        let (d, r) = encode_labels(&g, &EncodeOptions::default()).unwrap();
        for set in [LabelSet::Dist(d), LabelSet::Rout(r)] {
            for format in [FileFormat::Text, FileFormat::Binary] {
                let back = LabelSet::load(&set.save(format)).unwrap();
                assert_eq!(back, set);
                assert_eq!(back.query(5, 5).unwrap(), 0);
            }
        }
        assert!(LabelSet::load(b"hello").is_err());
        let LabelSet::Dist(mut d) = LabelSet::load(
            &LabelSet::Dist(encode_labels(&g, &EncodeOptions::default()).unwrap().0).save(FileFormat::Binary),
        )
        .unwrap() else {
            unreachable!()
        };
        assert!(matches!(
            LabelSet::Dist(d.clone()).query(0, 99),
            Err(Error::InvalidVertex(99))
        ));
        d.swap(0, 1);
        assert!(LabelSet::load(&LabelSet::Dist(d).save(FileFormat::Text)).is_err());
    }

    #[test]
    fn varints() {
        for x in [0u64, 1, 127, 128, 300, u32::MAX as u64, u64::MAX] {
            let mut out = Vec::new();
            put(&mut out, x);
            assert_eq!(Reader::new(&out).get().unwrap(), x);
        }
        let mut out = Vec::new();
        put(&mut out, 300);
        assert_eq!(out, vec![0xac, 0x02]);
    }

    #[test]
    fn round_trips() {
        for g in [path_tree(1), path_tree(5), gen_grid(4, 5)] {
            let (d, r) = encode_labels(&g, &EncodeOptions::default()).unwrap();
            assert_eq!(from_binary::<DistLabel>(&to_binary(&d)).unwrap(), d);
            assert_eq!(from_binary::<RoutLabel>(&to_binary(&r)).unwrap(), r);
            assert_eq!(from_text::<DistLabel>(&to_text(&d)).unwrap(), d);
            assert_eq!(from_text::<RoutLabel>(&to_text(&r)).unwrap(), r);
        }
    }

    #[test]
    fn text_shape() {
        let (d, _) = encode_labels(&path_tree(5), &EncodeOptions::default()).unwrap();
        let text = to_text(&d);
        assert!(text.starts_with("CFML1 dist n=5\n"));
        let line0 = text.lines().nth(1).unwrap();
        assert!(line0.starts_with("0 ncad{"), "{line0}");
        assert!(line0.contains("{2,2,1.0;"), "{line0}");
    }

    #[test]
    fn rejects_garbage() {
        assert!(from_binary::<DistLabel>(b"CFMR1\x00").is_err());
        assert!(from_binary::<DistLabel>(b"CFML1\x01\x05ab").is_err());
        assert!(from_text::<DistLabel>("CFML1 dist n=1\n0 ncad{0;0:0} levels[{").is_err());
        assert!(from_text::<DistLabel>("CFML1 dist n=2\n0 ncad{0;0:0} levels[]\n").is_err());
        assert_eq!(LabelKind::sniff(b"CFMR1..."), Some(LabelKind::Rout));
    }
}
