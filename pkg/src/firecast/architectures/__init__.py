"""Forecasting architectures.

ForecastModel is the abstract contract; GruModel, ConvLstmModel and
TgcnModel implement it on top of the nn-core ops.
"""

from .convlstm_model import ConvLstmModel, convlstm_cell_step, convlstm_forward
from .forecast_model import ForecastModel
from .gru_model import GruModel, gru_cell_step, gru_forward
from .readout import MlpReadout
from .tgcn_model import TgcnModel, gcn2_forward, tgcn_cell_step, tgcn_forward

__all__ = [
    "ForecastModel", "MlpReadout",
    "GruModel", "gru_cell_step", "gru_forward",
    "ConvLstmModel", "convlstm_cell_step", "convlstm_forward",
    "TgcnModel", "gcn2_forward", "tgcn_cell_step", "tgcn_forward",
]
