//! C ABI over the core library.
//!
//! Conventions: constructors hand back opaque handles through `out`
//! parameters and return [`SbStatus`]; every failure also stores a
//! message retrievable with [`sb_last_error`]. Handles are freed with
//! the matching `_free` function; passing null to a `_free` is a no-op.
//! Pointers returned by getters borrow from their handle and stay valid
//! until that handle is freed.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use sensebench::classifier::{self, LearnerKind, LearnerParams, TrainedModel};
use sensebench::dataset::{load_dataset, read_dataset, save_dataset, Dataset, SparseBinaryVector};
use sensebench::rng::{self, tag};
use sensebench::synth;
use sensebench::Error;

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SbStatus {
    /// Success.
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The operating system reported an I/O error.
    Io = 3,
    /// A file or buffer did not match the expected format.
    Parse = 4,
    /// Arguments were structurally valid but out of range.
    BadConfig = 5,
    /// Training failed on this dataset.
    Train = 6,
    /// An index argument was out of range.
    OutOfRange = 7,
    /// Internal invariant violated; state is still consistent.
    Internal = 8,
}

/// Classifier selector, mirroring the CLI ids.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SbLearner {
    NaiveBayes = 0,
    Perceptron = 1,
    DecisionTree = 2,
    Knn = 3,
    PfoilDnf = 4,
    PfoilCnf = 5,
    PfoilDlist = 6,
}

/// Synthetic concept family for [`sb_dataset_synth`].
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SbFamily {
    /// `a`-of-`b` threshold concept (two senses).
    MOfN = 0,
    /// `a` terms of `b` literals each (two senses).
    Dnf = 1,
    /// Generative model with `a` senses; `b` is ignored.
    Generative = 2,
}

/// Training hyperparameters. Obtain defaults from [`sb_params_default`].
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct SbParams {
    /// Laplace smoothing for naive Bayes.
    pub alpha: f64,
    /// Perceptron learning rate.
    pub eta: f64,
    /// Perceptron epoch cap.
    pub epochs: usize,
    /// Neighbor count for k-NN.
    pub k: usize,
    /// Whether the decision tree is pruned.
    pub prune: bool,
}

/// Opaque dataset handle.
pub struct SbDataset {
    inner: Dataset,
    sense_names: Vec<CString>,
}

/// Opaque trained-model handle.
pub struct SbModel {
    inner: TrainedModel,
    features: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let clean: String = message.chars().filter(|&ch| ch != '\0').collect();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = CString::new(clean).unwrap());
}

fn fail(status: SbStatus, message: &str) -> SbStatus {
    set_error(message);
    status
}

fn status_of(err: &Error) -> SbStatus {
    match err {
        Error::Io(_) => SbStatus::Io,
        Error::Parse { .. } => SbStatus::Parse,
        Error::BadConceptSpec(_)
        | Error::BadConfig(_)
        | Error::SplitOutOfRange { .. }
        | Error::TooFewSamples { .. }
        | Error::LengthMismatch { .. }
        | Error::MissingCell { .. } => SbStatus::BadConfig,
        Error::NoFeatures
        | Error::EmptyDataset
        | Error::NoPositives
        | Error::CoverStalled { .. }
        | Error::BadNeighborCount { .. } => SbStatus::Train,
    }
}

fn report(err: Error) -> SbStatus {
    let status = status_of(&err);
    set_error(&err.to_string());
    status
}

/// Catches panics so they cannot unwind across the ABI.
fn guarded(body: impl FnOnce() -> SbStatus) -> SbStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(SbStatus::Internal, "internal panic"),
    }
}

macro_rules! require {
    ($ptr:expr) => {
        if $ptr.is_null() {
            return fail(
                SbStatus::NullArgument,
                concat!(stringify!($ptr), " is null"),
            );
        }
    };
}

/// # Safety
/// `ptr` must be a NUL-terminated string or null.
unsafe fn utf8_arg<'a>(ptr: *const c_char) -> Result<&'a str, SbStatus> {
    match CStr::from_ptr(ptr).to_str() {
        Ok(s) => Ok(s),
        Err(_) => Err(fail(SbStatus::InvalidUtf8, "argument is not valid UTF-8")),
    }
}

fn wrap_dataset(data: Dataset, out: *mut *mut SbDataset) -> SbStatus {
    let sense_names = data
        .senses
        .iter()
        .map(|s| CString::new(s.name.replace('\0', "")).unwrap())
        .collect();
    let handle = Box::new(SbDataset {
        inner: data,
        sense_names,
    });
    unsafe { *out = Box::into_raw(handle) };
    SbStatus::Ok
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message for the most recent failure on this thread. Never null;
/// empty before the first failure. Valid until the next failing call
/// on the same thread.
#[no_mangle]
pub extern "C" fn sb_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// The defaults used by the CLI.
#[no_mangle]
pub extern "C" fn sb_params_default() -> SbParams {
    let p = LearnerParams::default();
    SbParams {
        alpha: p.alpha,
        eta: p.eta,
        epochs: p.epochs,
        k: p.k,
        prune: p.prune,
    }
}

/// Loads a serialized dataset from `path`.
///
/// # Safety
/// `path` must be NUL-terminated; `out` must be a valid location.
#[no_mangle]
pub unsafe extern "C" fn sb_dataset_load(
    path: *const c_char,
    out: *mut *mut SbDataset,
) -> SbStatus {
    require!(path);
    require!(out);
    guarded(|| {
        let path = match utf8_arg(path) {
            Ok(p) => p,
            Err(status) => return status,
        };
        match load_dataset(std::path::Path::new(path)) {
            Ok(data) => wrap_dataset(data, out),
            Err(e) => report(e),
        }
    })
}

/// Parses a dataset from an in-memory string in the serialized format.
///
/// # Safety
/// `text` must be NUL-terminated; `out` must be a valid location.
#[no_mangle]
pub unsafe extern "C" fn sb_dataset_parse(
    text: *const c_char,
    out: *mut *mut SbDataset,
) -> SbStatus {
    require!(text);
    require!(out);
    guarded(|| {
        let text = match utf8_arg(text) {
            Ok(t) => t,
            Err(status) => return status,
        };
        match read_dataset(text) {
            Ok(data) => wrap_dataset(data, out),
            Err(e) => report(e),
        }
    })
}

/// Generates a synthetic dataset. `a` and `b` parameterize the family
/// (see [`SbFamily`]); labels are flipped to a random other sense with
/// probability `noise`.
///
/// # Safety
/// `out` must be a valid location.
#[no_mangle]
pub unsafe extern "C" fn sb_dataset_synth(
    family: SbFamily,
    a: usize,
    b: usize,
    features: usize,
    examples: usize,
    noise: f64,
    seed: u64,
    out: *mut *mut SbDataset,
) -> SbStatus {
    require!(out);
    guarded(|| {
        let spec = match family {
            SbFamily::MOfN => synth::random_m_of_n(a, b, features, examples, noise, seed),
            SbFamily::Dnf => synth::random_dnf(a, b, features, examples, noise, seed),
            SbFamily::Generative => synth::random_generative(a, features, examples, noise, seed),
        };
        match spec.and_then(|s| synth::generate(&s)) {
            Ok(data) => wrap_dataset(data, out),
            Err(e) => report(e),
        }
    })
}

/// Writes `data` to `path` in the serialized format.
///
/// # Safety
/// Both pointers must be valid; `path` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn sb_dataset_save(data: *const SbDataset, path: *const c_char) -> SbStatus {
    require!(data);
    require!(path);
    guarded(|| {
        let path = match utf8_arg(path) {
            Ok(p) => p,
            Err(status) => return status,
        };
        match save_dataset(&(*data).inner, std::path::Path::new(path)) {
            Ok(()) => SbStatus::Ok,
            Err(e) => report(e),
        }
    })
}

/// Frees a dataset handle. Null is ignored.
///
/// # Safety
/// `data` must have come from this library and not been freed before.
#[no_mangle]
pub unsafe extern "C" fn sb_dataset_free(data: *mut SbDataset) {
    if !data.is_null() {
        drop(Box::from_raw(data));
    }
}

/// Number of examples; 0 for null.
///
/// # Safety
/// `data` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn sb_dataset_examples(data: *const SbDataset) -> usize {
    if data.is_null() {
        return 0;
    }
    (*data).inner.len()
}

/// Size of the feature space; 0 for null.
///
/// # Safety
/// `data` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn sb_dataset_features(data: *const SbDataset) -> usize {
    if data.is_null() {
        return 0;
    }
    (*data).inner.feature_count()
}

/// Number of senses; 0 for null.
///
/// # Safety
/// `data` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn sb_dataset_senses(data: *const SbDataset) -> usize {
    if data.is_null() {
        return 0;
    }
    (*data).inner.sense_count()
}

/// Name of sense `id`, borrowed from the handle; null if `data` is null
/// or `id` is out of range.
///
/// # Safety
/// `data` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn sb_dataset_sense_name(data: *const SbDataset, id: usize) -> *const c_char {
    if data.is_null() {
        return std::ptr::null();
    }
    let handle = &*data;
    match handle.sense_names.get(id) {
        Some(name) => name.as_ptr(),
        None => std::ptr::null(),
    }
}

fn learner_kind(learner: SbLearner) -> LearnerKind {
    match learner {
        SbLearner::NaiveBayes => LearnerKind::NaiveBayes,
        SbLearner::Perceptron => LearnerKind::Perceptron,
        SbLearner::DecisionTree => LearnerKind::DecisionTree,
        SbLearner::Knn => LearnerKind::Knn,
        SbLearner::PfoilDnf => LearnerKind::PfoilDnf,
        SbLearner::PfoilCnf => LearnerKind::PfoilCnf,
        SbLearner::PfoilDlist => LearnerKind::PfoilDlist,
    }
}

fn learner_of(kind: LearnerKind) -> SbLearner {
    match kind {
        LearnerKind::NaiveBayes => SbLearner::NaiveBayes,
        LearnerKind::Perceptron => SbLearner::Perceptron,
        LearnerKind::DecisionTree => SbLearner::DecisionTree,
        LearnerKind::Knn => SbLearner::Knn,
        LearnerKind::PfoilDnf => SbLearner::PfoilDnf,
        LearnerKind::PfoilCnf => SbLearner::PfoilCnf,
        LearnerKind::PfoilDlist => SbLearner::PfoilDlist,
    }
}

/// Trains `learner` on the whole dataset. `params` may be null for
/// defaults. Randomized learners draw from a stream derived from `seed`,
/// so equal seeds give equal models.
///
/// # Safety
/// `data` must be a live handle; `params` valid or null; `out` a valid
/// location.
#[no_mangle]
pub unsafe extern "C" fn sb_train(
    data: *const SbDataset,
    learner: SbLearner,
    params: *const SbParams,
    seed: u64,
    out: *mut *mut SbModel,
) -> SbStatus {
    require!(data);
    require!(out);
    guarded(|| {
        let p = if params.is_null() {
            LearnerParams::default()
        } else {
            let p = *params;
            LearnerParams {
                alpha: p.alpha,
                eta: p.eta,
                epochs: p.epochs,
                k: p.k,
                prune: p.prune,
            }
        };
        let kind = learner_kind(learner);
        let dataset = &(*data).inner;
        let mut stream = rng::stream(seed, &[tag::LEARNER, kind.stream_tag()]);
        match classifier::train(kind, dataset, &p, &mut stream) {
            Ok(model) => {
                let handle = Box::new(SbModel {
                    inner: model,
                    features: dataset.feature_count(),
                });
                *out = Box::into_raw(handle);
                SbStatus::Ok
            }
            Err(e) => report(e),
        }
    })
}

/// Frees a model handle. Null is ignored.
///
/// # Safety
/// `model` must have come from this library and not been freed before.
#[no_mangle]
pub unsafe extern "C" fn sb_model_free(model: *mut SbModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Which learner produced this model.
///
/// # Safety
/// `model` must be a live handle; `out` a valid location.
#[no_mangle]
pub unsafe extern "C" fn sb_model_learner(model: *const SbModel, out: *mut SbLearner) -> SbStatus {
    require!(model);
    require!(out);
    *out = learner_of((*model).inner.kind());
    SbStatus::Ok
}

/// Learner-specific size (leaves, literals, parameters, or stored
/// examples); 0 for null.
///
/// # Safety
/// `model` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn sb_model_size(model: *const SbModel) -> usize {
    if model.is_null() {
        return 0;
    }
    (*model).inner.size()
}

/// Classifies one example given as the indices of its present features
/// (any order, duplicates allowed). `present` may be null when `len` is
/// 0. Fails with `OutOfRange` if an index is outside the training
/// feature space.
///
/// # Safety
/// `model` must be a live handle; `present` must point to `len` indices;
/// `out_sense` must be a valid location.
#[no_mangle]
pub unsafe extern "C" fn sb_predict(
    model: *const SbModel,
    present: *const usize,
    len: usize,
    out_sense: *mut usize,
) -> SbStatus {
    require!(model);
    require!(out_sense);
    if len > 0 && present.is_null() {
        return fail(SbStatus::NullArgument, "present is null with nonzero len");
    }
    guarded(|| {
        let handle = &*model;
        let indices = if len == 0 {
            Vec::new()
        } else {
            std::slice::from_raw_parts(present, len).to_vec()
        };
        if let Some(&bad) = indices.iter().find(|&&i| i >= handle.features) {
            return fail(
                SbStatus::OutOfRange,
                &format!("feature index {bad} outside space of {}", handle.features),
            );
        }
        let x = SparseBinaryVector::from_indices(indices);
        *out_sense = handle.inner.predict(&x);
        SbStatus::Ok
    })
}

/// Fraction of `data` the model labels correctly.
///
/// # Safety
/// `model` and `data` must be live handles; `out` a valid location.
#[no_mangle]
pub unsafe extern "C" fn sb_accuracy(
    model: *const SbModel,
    data: *const SbDataset,
    out: *mut f64,
) -> SbStatus {
    require!(model);
    require!(data);
    require!(out);
    guarded(|| {
        let dataset = &(*data).inner;
        if dataset.feature_count() != (*model).features {
            return fail(
                SbStatus::BadConfig,
                &format!(
                    "dataset has {} features, model was trained on {}",
                    dataset.feature_count(),
                    (*model).features
                ),
            );
        }
        *out = classifier::accuracy(&(*model).inner, dataset);
        SbStatus::Ok
    })
}
