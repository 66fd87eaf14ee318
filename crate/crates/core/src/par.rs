//! Data-parallel driver helpers.
//!
//! Every sweep in this crate is a pure map over an immutable slice of
//! graphs, so parallelism is a drop-in. With the default `parallel` feature
//! the maps run on rayon; without it they fall back to the sequential
//! versions below, which are also exported for benchmark comparison.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Sequential map, always available. This is the fallback used when the
/// `parallel` feature is disabled.
pub fn map_seq<T, R>(items: &[T], f: impl Fn(&T) -> R) -> Vec<R> {
    items.iter().map(f).collect()
}

/// Order-preserving map over a slice, parallel when the feature allows.
#[cfg(feature = "parallel")]
pub fn map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    items.par_iter().map(f).collect()
}

/// Order-preserving map over a slice, parallel when the feature allows.
#[cfg(not(feature = "parallel"))]
pub fn map<T, R>(items: &[T], f: impl Fn(&T) -> R) -> Vec<R> {
    map_seq(items, f)
}

/// Flat-maps `f` over `items` in chunks and feeds every produced value to
/// the sequential `sink`. Used by the generator, where the sink owns a
/// deduplication table that would be contended if shared.
#[cfg(feature = "parallel")]
pub fn chunked_flat_map<T, R, F, S>(items: &[T], chunk: usize, f: F, mut sink: S)
where
    T: Sync,
    R: Send,
    F: Fn(&T, &mut Vec<R>) + Sync,
    S: FnMut(Vec<R>),
{
    let (tx, rx) = std::sync::mpsc::channel::<Vec<R>>();
    let fref = &f;
    std::thread::scope(|s| {
        s.spawn(move || {
            items.par_chunks(chunk.max(1)).for_each_with(tx, |tx, block| {
                let mut out = Vec::new();
                for item in block {
                    fref(item, &mut out);
                }
                let _ = tx.send(out);
            });
        });
        for batch in rx.iter() {
            sink(batch);
        }
    });
}

/// Flat-maps `f` over `items` in chunks and feeds every produced value to
/// the sequential `sink`.
#[cfg(not(feature = "parallel"))]
pub fn chunked_flat_map<T, R, F, S>(items: &[T], chunk: usize, f: F, mut sink: S)
where
    F: Fn(&T, &mut Vec<R>),
    S: FnMut(Vec<R>),
{
    for block in items.chunks(chunk.max(1)) {
        let mut out = Vec::new();
        for item in block {
            f(item, &mut out);
        }
        sink(out);
    }
}
