"""
Tensor con registro de operaciones para diferenciación en modo inverso.
"""

import logging
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from autodiff.exceptions import GraphCycleError


logger = logging.getLogger(__name__)

BackwardFn = Callable[[np.ndarray], Sequence[Optional[np.ndarray]]]


class Tensor:
    """
    Array n-dimensional que participa en un grafo de gradientes. `op` y `parents` describen
    la operación que lo produjo; `backward_fn` convierte el gradiente de la salida en los
    gradientes de cada padre.
    """

    def __init__(
            self,
            data: np.ndarray,
            requires_grad: bool = False,
            parents: Tuple["Tensor", ...] = (),
            op: str = "",
            backward_fn: Optional[BackwardFn] = None,
            name: Optional[str] = None,
    ) -> None:
        self.data = np.asarray(data)
        self.grad: Optional[np.ndarray] = None
        self.requires_grad = requires_grad or any(p.requires_grad for p in parents)
        self.parents = parents
        self.op = op
        self.backward_fn = backward_fn
        self.name = name

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.data.shape

    @property
    def dtype(self) -> np.dtype:
        return self.data.dtype

    @property
    def is_leaf(self) -> bool:
        return not self.parents

    def zero_grad(self) -> None:
        self.grad = None

    def backward(self, grad: Optional[np.ndarray] = None) -> None:
        backward(self, grad=grad)

    def __repr__(self) -> str:
        label = self.name or self.op or "tensor"
        return f"Tensor({label}, shape={self.shape}, dtype={self.dtype})"


class Parameter(Tensor):
    """Tensor hoja entrenable con nombre estable."""

    def __init__(self, data: np.ndarray, name: str) -> None:
        super().__init__(np.array(data, copy=True), requires_grad=True, name=name)


def topological_order(root: Tensor) -> List[Tensor]:
    """
    Orden topológico (padres antes que hijos) de los nodos alcanzables desde `root`,
    calculado sin recursión.
    """
    state: Dict[int, int] = {}  # 1 = en curso, 2 = terminado
    order: List[Tensor] = []
    stack: List[Tuple[Tensor, bool]] = [(root, False)]

    while stack:
        node, expanded = stack.pop()
        key = id(node)
        if expanded:
            state[key] = 2
            order.append(node)
            continue
        if state.get(key) == 2:
            continue
        if state.get(key) == 1:
            raise GraphCycleError(repr(node))
        state[key] = 1
        stack.append((node, True))
        for parent in node.parents:
            parent_state = state.get(id(parent))
            if parent_state == 1:
                raise GraphCycleError(repr(parent))
            if parent_state is None:
                stack.append((parent, False))
    return order


def backward(
        loss: Tensor,
        grad: Optional[np.ndarray] = None,
        parameters: Optional[Iterable[Tensor]] = None,
) -> None:
    """
    Acumula en `.grad` los gradientes de `loss` respecto a todos los nodos alcanzables que
    requieren gradiente. Los `parameters` que no están en ningún camino reciben gradiente cero.
    """
    if grad is None:
        if loss.data.size != 1:
            raise ValueError("backward sin gradiente inicial requiere una salida escalar.")
        grad = np.ones_like(loss.data)

    order = topological_order(loss)
    grads: Dict[int, np.ndarray] = {id(loss): np.asarray(grad, dtype=loss.data.dtype)}

    for node in reversed(order):
        node_grad = grads.pop(id(node), None)
        if node_grad is None or not node.requires_grad:
            continue
        if node.is_leaf:
            node.grad = node_grad.copy() if node.grad is None else node.grad + node_grad
            continue
        if node.backward_fn is None:
            continue
        parent_grads = node.backward_fn(node_grad)
        for parent, parent_grad in zip(node.parents, parent_grads):
            if parent_grad is None or not parent.requires_grad:
                continue
            key = id(parent)
            grads[key] = parent_grad if key not in grads else grads[key] + parent_grad

    if parameters is not None:
        for param in parameters:
            if param.grad is None:
                param.grad = np.zeros_like(param.data)
