"""
RBF module
Network evaluation, RBF-1 / RBF-2 training and their clustering primitives
"""

from .network import RbfNetwork, radbas, rbf_forward, spread_to_bias
from .clustering import GmmModel, kmeans, em_gmm_circular
from .training import solve_output_layer, train_rbf1, train_rbf2
from .serialization import model_serialize, model_deserialize

__all__ = [
    'RbfNetwork',
    'radbas',
    'rbf_forward',
    'spread_to_bias',
    'GmmModel',
    'kmeans',
    'em_gmm_circular',
    'solve_output_layer',
    'train_rbf1',
    'train_rbf2',
    'model_serialize',
    'model_deserialize',
]
