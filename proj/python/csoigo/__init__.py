"""Face recognition with second-order gradient orientations, complex PCA and
collaborative representation."""

from ._core import (
    CrcCoder,
    DataError,
    Error,
    InvalidArgument,
    NumericError,
    Recognizer,
    SubspaceModel,
    complex_map,
    evaluate,
    extract,
    first_order_gradients,
    fit,
    fit_complex_pca,
    load,
    load_image,
    nnc_classify,
    occlude,
    occlusion_side,
    orientation_field,
    resize,
    save_image,
    second_order_gradients,
    stack_real_imag,
)

__all__ = [name for name in dir() if not name.startswith("_")]
