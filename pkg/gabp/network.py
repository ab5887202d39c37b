"""Three-layer BP neural network built on numpy.

hidden = act(W1 @ x + b1), output = W2 @ hidden + b2 (identity output).
Networks are immutable; training returns a new Network. The chromosome codec
orders genes as W1 (row-major), b1, W2 (row-major), b2.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from .errors import DimensionMismatch, InputError, LengthMismatch, NonFiniteLoss
from .models.run_config import Activation, NetShape

logger = logging.getLogger(__name__)

UNBOUNDED = (-np.inf, np.inf)


def _sigmoid(z: np.ndarray) -> np.ndarray:
    return 0.5 * (1.0 + np.tanh(0.5 * z))


# activation and its derivative expressed through the activation's output
ACTIVATIONS: Dict[Activation, Tuple[Callable, Callable]] = {
    Activation.TANH: (np.tanh, lambda a: 1.0 - a * a),
    Activation.SIGMOID: (_sigmoid, lambda a: a * (1.0 - a)),
    Activation.IDENTITY: (lambda z: z, lambda a: np.ones_like(a)),
}


def _readonly(values, shape) -> np.ndarray:
    array = np.array(values, dtype=float).reshape(shape)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class Network:
    shape: NetShape
    W1: np.ndarray
    b1: np.ndarray
    W2: np.ndarray
    b2: np.ndarray
    hidden_activation: Activation = Activation.TANH
    output_activation: Activation = Activation.IDENTITY

    def __post_init__(self):
        s = self.shape
        expected = {
            'W1': (s.n_hidden, s.n_in),
            'b1': (s.n_hidden,),
            'W2': (s.n_out, s.n_hidden),
            'b2': (s.n_out,),
        }
        for name, dims in expected.items():
            values = np.asarray(getattr(self, name), dtype=float)
            if values.size != int(np.prod(dims)):
                raise DimensionMismatch(f"{name} has {values.size} entries, expected shape {dims}")
            if not np.isfinite(values).all():
                raise NonFiniteLoss(f"{name} contains non-finite parameters")
            object.__setattr__(self, name, _readonly(values, dims))

    def parameters(self) -> List[np.ndarray]:
        return [self.W1, self.b1, self.W2, self.b2]

    def same_parameters(self, other: "Network") -> bool:
        """Bit-exact equality of shape, activations and every parameter"""
        return (self.shape == other.shape
                and self.hidden_activation == other.hidden_activation
                and self.output_activation == other.output_activation
                and all(np.array_equal(a, b) for a, b in zip(self.parameters(), other.parameters())))

    def output_bound(self) -> np.ndarray:
        """|o| <= ||W2 row||_1 * max|act| + |b2|; act is tanh or sigmoid, both within [-1, 1]"""
        return np.abs(self.W2).sum(axis=1) + np.abs(self.b2)


@dataclass(frozen=True, eq=False)
class Chromosome:
    genes: np.ndarray
    bounds: Tuple[float, float] = UNBOUNDED

    def __post_init__(self):
        genes = np.array(self.genes, dtype=float).ravel()
        low, high = self.bounds
        if not low < high:
            raise InputError(f"gene bounds {self.bounds} are empty", module="network")
        if genes.size and (genes.min() < low or genes.max() > high):
            raise InputError(f"genes fall outside bounds {self.bounds}", module="network")
        genes.setflags(write=False)
        object.__setattr__(self, "genes", genes)

    def __len__(self) -> int:
        return len(self.genes)

    def with_genes(self, genes: np.ndarray) -> "Chromosome":
        return Chromosome(genes=genes, bounds=self.bounds)


@dataclass
class TrainResult:
    network: Network
    loss_trace: List[float] = field(default_factory=list)
    seed: Optional[int] = None

    @property
    def final_loss(self) -> Optional[float]:
        return self.loss_trace[-1] if self.loss_trace else None


def encode(net: Network, bounds: Tuple[float, float] = UNBOUNDED) -> Chromosome:
    genes = np.concatenate([p.ravel() for p in net.parameters()])
    return Chromosome(genes=genes, bounds=bounds)


def decode(chromosome: Chromosome, shape: NetShape,
           hidden_activation: Activation = Activation.TANH) -> Network:
    genes = chromosome.genes
    if len(genes) != shape.gene_length:
        raise LengthMismatch(f"chromosome has {len(genes)} genes; shape {shape.to_dict()} "
                             f"needs {shape.gene_length}")

    sizes = [shape.n_hidden * shape.n_in, shape.n_hidden, shape.n_out * shape.n_hidden, shape.n_out]
    W1, b1, W2, b2 = np.split(genes, np.cumsum(sizes)[:-1])
    return Network(shape=shape, W1=W1, b1=b1, W2=W2, b2=b2, hidden_activation=hidden_activation)


def random_network(shape: NetShape, rng: np.random.Generator, low: float = -1.0, high: float = 1.0,
                   hidden_activation: Activation = Activation.TANH) -> Network:
    """Parameters drawn uniformly from [low, high]"""
    genes = rng.uniform(low, high, size=shape.gene_length)
    return decode(Chromosome(genes=genes, bounds=(low, high)), shape, hidden_activation)


def _as_batch(net: Network, x) -> Tuple[np.ndarray, bool]:
    X = np.asarray(x, dtype=float)
    single = X.ndim == 1
    X = np.atleast_2d(X)
    if X.ndim != 2 or X.shape[1] != net.shape.n_in:
        raise DimensionMismatch(f"input has shape {np.shape(x)}; network expects {net.shape.n_in} features")
    if not np.isfinite(X).all():
        raise DimensionMismatch("input contains non-finite values")
    return X, single


def _forward_batch(net: Network, X: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    act, _ = ACTIVATIONS[net.hidden_activation]
    out_act, _ = ACTIVATIONS[net.output_activation]
    hidden = act(X @ net.W1.T + net.b1)
    return hidden, out_act(hidden @ net.W2.T + net.b2)


def forward(net: Network, x) -> np.ndarray:
    """Output vector for one input vector, or an (m, n_out) matrix for a batch"""
    X, single = _as_batch(net, x)
    _, output = _forward_batch(net, X)
    return output[0] if single else output


def predict(net: Network, X) -> np.ndarray:
    """First output node for each row of X"""
    return forward(net, np.atleast_2d(X))[:, 0]


def _targets(net: Network, y, m: int) -> np.ndarray:
    Y = np.asarray(y, dtype=float).reshape(m, -1) if m else np.zeros((0, net.shape.n_out))
    if Y.shape[1] != net.shape.n_out:
        raise DimensionMismatch(f"targets have {Y.shape[1]} columns; network has {net.shape.n_out} outputs")
    return Y


def loss_and_gradients(net: Network, X, y) -> Tuple[float, List[np.ndarray]]:
    """Mean squared error over all samples and outputs, and its gradient
    with respect to [W1, b1, W2, b2]."""
    X, _ = _as_batch(net, X)
    m = X.shape[0]
    Y = _targets(net, y, m)

    hidden, output = _forward_batch(net, X)
    diff = output - Y
    loss = float(np.mean(diff * diff))

    _, out_grad = ACTIVATIONS[net.output_activation]
    _, hidden_grad = ACTIVATIONS[net.hidden_activation]
    d_out = 2.0 * diff / diff.size * out_grad(output)
    dW2 = d_out.T @ hidden
    db2 = d_out.sum(axis=0)
    d_hidden = (d_out @ net.W2) * hidden_grad(hidden)
    dW1 = d_hidden.T @ X
    db1 = d_hidden.sum(axis=0)
    return loss, [dW1, db1, dW2, db2]


def train_bp(net: Network, X, y, lr: float, epochs: int, seed: Optional[int] = None) -> TrainResult:
    """Full-batch gradient descent on MSE.

    The loss trace holds the loss each epoch's step was computed from. Full-batch
    steps draw no random numbers, so ``seed`` is only recorded on the result.
    """
    if not lr > 0:
        raise InputError(f"learning rate must be positive, got {lr}", module="network")
    if int(epochs) != epochs or epochs < 0:
        raise InputError(f"epochs must be a non-negative integer, got {epochs}", module="network")
    if len(np.atleast_2d(X)) == 0 or np.size(X) == 0:
        raise InputError("training data is empty", module="network")

    params = [p.copy() for p in net.parameters()]
    current = net
    trace: List[float] = []
    for epoch in range(int(epochs)):
        loss, grads = loss_and_gradients(current, X, y)
        if not np.isfinite(loss):
            raise NonFiniteLoss(f"loss diverged at epoch {epoch}; learning rate {lr} is too large")
        trace.append(loss)
        for p, g in zip(params, grads):
            p -= lr * g
        if not all(np.isfinite(p).all() for p in params):
            raise NonFiniteLoss(f"parameters diverged at epoch {epoch}; learning rate {lr} is too large")
        current = Network(current.shape, *params, hidden_activation=current.hidden_activation,
                          output_activation=current.output_activation)
        if epoch % 250 == 0:
            logger.debug("epoch %d loss %.6g", epoch, loss)

    return TrainResult(network=current, loss_trace=trace, seed=seed)


def fitness_error(net: Network, X, y, k: float = 1.0) -> float:
    """G = k * sum over samples and output nodes of |y - o|"""
    if not k > 0:
        raise InputError(f"fitness coefficient k must be positive, got {k}", module="network")
    X_batch, _ = _as_batch(net, X)
    Y = _targets(net, y, X_batch.shape[0])
    output = forward(net, X_batch)
    return float(k * np.abs(Y - output).sum())
