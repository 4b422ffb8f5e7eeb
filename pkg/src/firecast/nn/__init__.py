"""nn-core: tensors with reverse-mode gradients and the ops the models need."""

from . import ops
from .attention import MultiHeadSelfAttention, multi_head_self_attention
from .gradcheck import grad_check
from .losses import bce_loss
from .params import ParamStore, load_params, read_params, save_params
from .tensor import Tensor, as_tensor

__all__ = [
    "ops",
    "MultiHeadSelfAttention", "multi_head_self_attention",
    "grad_check", "bce_loss",
    "ParamStore", "load_params", "read_params", "save_params",
    "Tensor", "as_tensor",
]
