use std::cell::Cell;
use std::rc::Rc;

use crate::{Error, Result};

/// Storage precision of a tensor.
///
/// Arithmetic always runs in `f64`; `F32` rounds every stored element (values
/// and gradient accumulations) through single precision, reproducing the
/// round-off behaviour of a single-precision engine while keeping the
/// double-precision compute path available for gradient oracles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DType {
    F32,
    F64,
}

impl DType {
    pub fn size_bytes(self) -> usize {
        match self {
            DType::F32 => 4,
            DType::F64 => 8,
        }
    }

    #[inline]
    pub fn quantize(self, x: f64) -> f64 {
        match self {
            DType::F32 => x as f32 as f64,
            DType::F64 => x,
        }
    }
}

/// Dense n-dimensional array, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    shape: Vec<usize>,
    data: Vec<f64>,
    dtype: DType,
}

impl Tensor {
    pub fn from_vec(shape: Vec<usize>, data: Vec<f64>, dtype: DType) -> Result<Self> {
        let numel: usize = shape.iter().product();
        if numel != data.len() {
            return Err(Error::shape(
                "tensor",
                format!("shape {:?} implies {} elements, got {}", shape, numel, data.len()),
            ));
        }
        let mut t = Tensor { shape, data, dtype };
        t.quantize_in_place();
        Ok(t)
    }

    pub fn zeros(shape: Vec<usize>, dtype: DType) -> Self {
        let numel = shape.iter().product();
        Tensor { shape, data: vec![0.0; numel], dtype }
    }

    pub fn full(shape: Vec<usize>, value: f64, dtype: DType) -> Self {
        let numel = shape.iter().product();
        Tensor { shape, data: vec![dtype.quantize(value); numel], dtype }
    }

    pub fn scalar(value: f64, dtype: DType) -> Self {
        Tensor { shape: vec![], data: vec![dtype.quantize(value)], dtype }
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn rank(&self) -> usize {
        self.shape.len()
    }

    pub fn numel(&self) -> usize {
        self.data.len()
    }

    pub fn dtype(&self) -> DType {
        self.dtype
    }

    /// Logical storage footprint, used by the engine's memory accounting.
    pub fn byte_size(&self) -> usize {
        self.numel() * self.dtype.size_bytes()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub(crate) fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    /// Scalar extraction; the tensor must hold exactly one element.
    pub fn item(&self) -> Result<f64> {
        if self.numel() != 1 {
            return Err(Error::contract(
                "item",
                format!("expected scalar, got shape {:?}", self.shape),
            ));
        }
        Ok(self.data[0])
    }

    pub fn to_dtype(&self, dtype: DType) -> Tensor {
        let mut t = self.clone();
        t.dtype = dtype;
        t.quantize_in_place();
        t
    }

    pub(crate) fn quantize_in_place(&mut self) {
        if self.dtype == DType::F32 {
            for x in &mut self.data {
                *x = *x as f32 as f64;
            }
        }
    }

    pub(crate) fn with_shape(mut self, shape: Vec<usize>) -> Result<Self> {
        let numel: usize = shape.iter().product();
        if numel != self.data.len() {
            return Err(Error::shape(
                "reshape",
                format!("cannot view {} elements as {:?}", self.data.len(), shape),
            ));
        }
        self.shape = shape;
        Ok(self)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.data.iter()
    }

    /// Max-abs difference, for equivalence checks.
    pub fn max_abs_diff(&self, other: &Tensor) -> f64 {
        debug_assert_eq!(self.shape, other.shape);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Shared live/peak byte counter for all tapes of one rollout context.
///
/// Counts logical tensor-buffer bytes (values, gradients, checkpoint
/// stashes), not process RSS, so measurements are deterministic.
#[derive(Clone, Default)]
pub struct MemMeter(Rc<Cell<(usize, usize)>>);

impl MemMeter {
    pub fn new() -> Self {
        Self::default()
    }

    pub(crate) fn alloc(&self, bytes: usize) {
        let (live, peak) = self.0.get();
        let live = live + bytes;
        self.0.set((live, peak.max(live)));
    }

    pub(crate) fn free(&self, bytes: usize) {
        let (live, peak) = self.0.get();
        self.0.set((live.saturating_sub(bytes), peak));
    }

    pub fn live_bytes(&self) -> usize {
        self.0.get().0
    }

    pub fn peak_bytes(&self) -> usize {
        self.0.get().1
    }

    pub fn reset_peak(&self) {
        let (live, _) = self.0.get();
        self.0.set((live, live));
    }
}

/// Row index table for gather-style ops: `cols` source-row indices per
/// output row. `valid`, when present, marks which slots participate in
/// attention (out-of-bounds neighbours under a zero-pad boundary).
#[derive(Debug, Clone, PartialEq)]
pub struct IndexTable {
    pub rows: usize,
    pub cols: usize,
    pub idx: Vec<u32>,
    pub valid: Option<Vec<bool>>,
}

impl IndexTable {
    pub fn new(rows: usize, cols: usize, idx: Vec<u32>, valid: Option<Vec<bool>>) -> Result<Self> {
        if idx.len() != rows * cols {
            return Err(Error::shape(
                "index_table",
                format!("{}x{} table needs {} entries, got {}", rows, cols, rows * cols, idx.len()),
            ));
        }
        if let Some(v) = &valid {
            if v.len() != idx.len() {
                return Err(Error::shape("index_table", "validity mask length mismatch"));
            }
        }
        Ok(IndexTable { rows, cols, idx, valid })
    }

    pub fn entry(&self, row: usize, col: usize) -> usize {
        self.idx[row * self.cols + col] as usize
    }

    /// Replicates the table for `batch` stacked grids, offsetting row
    /// indices so batch items never attend across each other.
    pub fn tiled(&self, batch: usize) -> IndexTable {
        let n = self.rows;
        let mut idx = Vec::with_capacity(self.idx.len() * batch);
        for b in 0..batch {
            let off = (b * n) as u32;
            idx.extend(self.idx.iter().map(|&i| i + off));
        }
        let valid = self.valid.as_ref().map(|v| {
            let mut out = Vec::with_capacity(v.len() * batch);
            for _ in 0..batch {
                out.extend_from_slice(v);
            }
            out
        });
        IndexTable { rows: n * batch, cols: self.cols, idx, valid }
    }
}
