"""
带单纯群作用的有限单纯复形

- 顶点是整数标签；子复形保留全局标签，所有单纯符号都用整数升序作为全局顶点序
- 作用是左作用 g·v = action[g][v]，要求 action[gh] = action[g]∘action[h]
- regular: g 整体固定某单形 ⇒ g 逐点固定该单形；两次重心细分后作用一定是 regular 的
- 商复形一般只是 Δ-复形（orbit cell + 带符号面映射），所以单独建模
"""

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from loguru import logger

from core.exceptions import NotPure, NotRegular
from core.grp import FiniteGroup, centralizer
from core.linalg import SparseRationalMatrix
from core.schemas import ValidationReport

Simplex = Tuple[int, ...]


def permutation_sign(seq: Sequence[int]) -> int:
    """把 seq 排成升序所需置换的符号（逆序对计数）"""
    inversions = sum(1 for i, j in combinations(range(len(seq)), 2) if seq[i] > seq[j])
    return -1 if inversions % 2 else 1


def faces(simplex: Simplex) -> List[Simplex]:
    """余维 1 的面，第 i 个面去掉第 i 个顶点"""
    return [simplex[:i] + simplex[i + 1:] for i in range(len(simplex))] if len(simplex) > 1 else []


# ==================== 单纯复形 ====================

class SimplicialComplex:
    """
    有限单纯复形（对取面封闭，每个顶点都是 0-单形）

    Args:
        vertices: 顶点标签
        simplices: 单形（顶点列表），自动补全所有面
    """

    def __init__(self, vertices: Iterable[int] = (), simplices: Iterable[Sequence[int]] = ()):
        closed = set()
        for v in vertices:
            closed.add((int(v),))
        for s in simplices:
            top = tuple(sorted(set(int(v) for v in s)))
            if not top:
                continue
            for k in range(1, len(top) + 1):
                closed.update(combinations(top, k))
        by_dim: Dict[int, List[Simplex]] = {}
        for s in closed:
            by_dim.setdefault(len(s) - 1, []).append(s)
        self.dim = max(by_dim) if by_dim else -1
        self._by_dim: Tuple[Tuple[Simplex, ...], ...] = tuple(
            tuple(sorted(by_dim.get(k, []))) for k in range(self.dim + 1)
        )
        self._index: Tuple[Dict[Simplex, int], ...] = tuple(
            {s: i for i, s in enumerate(level)} for level in self._by_dim
        )

    @property
    def vertices(self) -> Tuple[int, ...]:
        return tuple(s[0] for s in self.simplices(0))

    def simplices(self, k: int) -> Tuple[Simplex, ...]:
        if 0 <= k <= self.dim:
            return self._by_dim[k]
        return ()

    def all_simplices(self) -> List[Simplex]:
        return [s for level in self._by_dim for s in level]

    def count(self, k: int) -> int:
        return len(self.simplices(k))

    def index(self, simplex: Simplex) -> int:
        return self._index[len(simplex) - 1][simplex]

    def __contains__(self, simplex) -> bool:
        k = len(simplex) - 1
        return 0 <= k <= self.dim and tuple(simplex) in self._index[k]

    def is_empty(self) -> bool:
        return self.dim < 0

    def f_vector(self) -> List[int]:
        return [len(level) for level in self._by_dim]

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * n for k, n in enumerate(self.f_vector()))

    def maximal_simplices(self) -> List[Simplex]:
        maximal = set(self.simplices(self.dim))
        for k in range(self.dim):
            cofaces = {f for s in self.simplices(k + 1) for f in faces(s)}
            maximal.update(s for s in self.simplices(k) if s not in cofaces)
        return sorted(maximal, key=lambda s: (len(s), s))

    def is_pure(self) -> bool:
        return all(len(s) - 1 == self.dim for s in self.maximal_simplices())

    def subcomplex(self, simplices: Iterable[Sequence[int]]) -> "SimplicialComplex":
        return SimplicialComplex((), simplices)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self._by_dim == other._by_dim

    def __hash__(self) -> int:
        return hash(self._by_dim)

    def __repr__(self) -> str:
        return f"SimplicialComplex(dim={self.dim}, f={self.f_vector()})"


def connected_components(K: SimplicialComplex) -> List[SimplicialComplex]:
    """连通分支，按最小顶点排序"""
    parent = {v: v for v in K.vertices}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in K.simplices(1):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    groups: Dict[int, List[Simplex]] = {}
    for s in K.all_simplices():
        groups.setdefault(find(s[0]), []).append(s)
    return [SimplicialComplex((), groups[root]) for root in sorted(groups)]


# ==================== 定向 ====================

@dataclass(frozen=True)
class Orientation:
    """
    顶维单形的符号

    top_signs 的键是升序单形；vertex_order 给出时，符号按该顶点序解释，
    normalized() 把它换算到全局升序。
    """
    top_signs: Mapping[Simplex, int]
    vertex_order: Optional[Tuple[int, ...]] = None

    def normalized(self) -> "Orientation":
        if self.vertex_order is None:
            return self
        rank = {v: i for i, v in enumerate(self.vertex_order)}
        signs = {}
        for simplex, sign in self.top_signs.items():
            ordered = sorted(simplex, key=lambda v: rank[v])
            signs[tuple(sorted(simplex))] = sign * permutation_sign(ordered)
        return Orientation(signs)

    def sign(self, simplex: Simplex) -> int:
        return self.normalized().top_signs.get(simplex, 0)

    def negated(self) -> "Orientation":
        base = self.normalized()
        return Orientation({s: -v for s, v in base.top_signs.items()})


def positive_orientation(K: SimplicialComplex) -> Orientation:
    """所有顶维单形取 +1（0 维复形的标准定向）"""
    return Orientation({s: 1 for s in K.simplices(K.dim)})


def orientation_boundary(K: SimplicialComplex, o: Orientation) -> Dict[Simplex, int]:
    """带符号顶维链的边界（只保留非零项）"""
    signs = o.normalized().top_signs
    boundary: Dict[Simplex, int] = {}
    for simplex in K.simplices(K.dim):
        sign = signs.get(simplex, 0)
        for i, face in enumerate(faces(simplex)):
            boundary[face] = boundary.get(face, 0) + sign * (-1) ** i
    return {f: c for f, c in boundary.items() if c}


def check_orientation(K: SimplicialComplex, o: Orientation) -> bool:
    """
    定向检查：每个顶维单形符号为 ±1，且带符号边界在每个余维 1 面上抵消

    Raises:
        NotPure: 复形不纯
    """
    if not K.is_pure():
        raise NotPure(f"复形不纯: 极大单形维数不全为 {K.dim}")
    signs = o.normalized().top_signs
    if any(signs.get(s) not in (1, -1) for s in K.simplices(K.dim)):
        return False
    if any(s not in K for s in signs):
        return False
    return not orientation_boundary(K, o)


# ==================== G-复形 ====================

@dataclass
class GComplex:
    """
    单纯复形 + 有限群的单纯作用

    Attributes:
        complex: 底复形
        group: 作用群
        action: 元素 id -> {顶点: 像顶点}
        orientation: 底复形的定向（可选）
        fixed_orientations: 元素 id -> 其不动点子复形的定向（可选）
        name: 报告中使用的名字
    """
    complex: SimplicialComplex
    group: FiniteGroup
    action: Tuple[Dict[int, int], ...]
    orientation: Optional[Orientation] = None
    fixed_orientations: Dict[int, Orientation] = field(default_factory=dict)
    name: str = "space"

    def act(self, g: int, v: int) -> int:
        return self.action[g][v]

    def act_simplex(self, g: int, simplex: Simplex) -> Simplex:
        return tuple(sorted(self.action[g][v] for v in simplex))

    def transport_sign(self, g: int, simplex: Simplex) -> int:
        """g 把 simplex 的升序顶点送到像单形时的定向符号"""
        return permutation_sign([self.action[g][v] for v in simplex])

    def right_act(self, v: int, g: int) -> int:
        """群胚约定的右作用 v·g := g⁻¹·v"""
        return self.action[self.group.inverse(g)][v]

    def fixes_pointwise(self, g: int, simplex: Simplex) -> bool:
        return all(self.action[g][v] == v for v in simplex)

    def orbit(self, simplex: Simplex) -> List[Simplex]:
        return sorted({self.act_simplex(g, simplex) for g in range(self.group.order)})

    def __repr__(self) -> str:
        return f"GComplex({self.name!r}, {self.complex!r}, |G|={self.group.order})"


def gcomplex_from_generators(
    K: SimplicialComplex,
    G: FiniteGroup,
    images: Sequence[Sequence[int]],
    orientation: Optional[Orientation] = None,
    name: str = "space",
) -> GComplex:
    """
    由生成元的顶点像扩张出整个作用（沿 Cayley 图 BFS）

    images[k] 是第 k 个生成元在顶点上的像，按 K.vertices 的顺序列出。
    扩张冲突时保留先到的值，由 validate_gcomplex 报告同态违例。
    """
    vertices = K.vertices
    if len(images) != len(G.generators):
        raise ValueError(f"生成元像的个数 {len(images)} 与群生成元个数 {len(G.generators)} 不一致")
    gen_maps = [dict(zip(vertices, (int(x) for x in image))) for image in images]
    for k, image in enumerate(images):
        if len(image) != len(vertices):
            raise ValueError(f"生成元 {k} 的像长度 {len(image)} 与顶点数 {len(vertices)} 不一致")

    action: List[Optional[Dict[int, int]]] = [None] * G.order
    action[G.identity] = {v: v for v in vertices}
    queue = deque([G.identity])
    while queue:
        x = queue.popleft()
        for s, smap in zip(G.generators, gen_maps):
            y = G.mul(x, s)
            if action[y] is None:
                xmap = action[x]
                action[y] = {v: xmap.get(smap[v], smap[v]) for v in vertices}
                queue.append(y)
    return GComplex(K, G, tuple(action), orientation=orientation, name=name)


def trivial_action(K: SimplicialComplex, G: FiniteGroup, **kwargs) -> GComplex:
    """G 平凡作用在 K 上"""
    ident = {v: v for v in K.vertices}
    return GComplex(K, G, tuple(dict(ident) for _ in range(G.order)), **kwargs)


# ==================== 校验与 regular 化 ====================

def validate_gcomplex(K: GComplex) -> ValidationReport:
    """
    检查同态性、单纯性、regular 性，列出全部违例（不抛异常）
    """
    X, G = K.complex, K.group
    vertices = set(X.vertices)
    violations: List[str] = []
    bijective = True

    for g in range(G.order):
        images = [K.action[g].get(v) for v in sorted(vertices)]
        if set(images) != vertices or len(set(images)) != len(images):
            violations.append(f"元素 {g} 不是顶点集上的双射")
            bijective = False

    homomorphism = bijective
    if bijective:
        for g in range(G.order):
            for h in range(G.order):
                gh = G.mul(g, h)
                if any(K.action[gh][v] != K.action[g][K.action[h][v]] for v in vertices):
                    violations.append(f"同态性违例: action[{gh}] != action[{g}]∘action[{h}]")
                    homomorphism = False

    simplicial = bijective
    regular = bijective
    if bijective:
        for g in range(G.order):
            for simplex in X.all_simplices():
                image = K.act_simplex(g, simplex)
                if image not in X:
                    violations.append(f"元素 {g} 把单形 {list(simplex)} 送到非单形 {list(image)}")
                    simplicial = False
                elif image == simplex and not K.fixes_pointwise(g, simplex):
                    violations.append(f"元素 {g} 整体固定单形 {list(simplex)} 但不逐点固定")
                    regular = False

    valid = homomorphism and simplicial and regular
    logger.debug(f"[gspace] validate {K.name}: valid={valid}, {len(violations)} 个违例")
    return ValidationReport(
        valid=valid,
        checks={"bijective": bijective, "homomorphism": homomorphism, "simplicial": simplicial, "regular": regular},
        violations=violations,
    )


def is_regular(K: GComplex) -> bool:
    for g in range(1, K.group.order):
        for simplex in K.complex.all_simplices():
            if K.act_simplex(g, simplex) == simplex and not K.fixes_pointwise(g, simplex):
                return False
    return True


def require_regular(K: GComplex) -> None:
    if not is_regular(K):
        raise NotRegular(f"{K.name}: 作用不是 regular 的，请先做重心细分")


def barycentric_subdivide(K: GComplex) -> GComplex:
    """
    重心细分及诱导作用

    新顶点是原单形，按 (维数, 顶点元组) 排序编号，所以原顶点若为 0..n-1 则编号不变。
    若 K 带定向，细分继承定向: 旗 σ0 < … < σd 的符号为
    sign(σd) · sgn(w_d, …, w_0) · (-1)^(d(d+1)/2)，其中 w_k = σk \\ σ(k-1)。
    """
    X = K.complex
    cells = sorted(X.all_simplices(), key=lambda s: (len(s), s))
    label = {s: i for i, s in enumerate(cells)}

    @lru_cache(maxsize=None)
    def flags(simplex: Simplex) -> Tuple[Tuple[Simplex, ...], ...]:
        chains = [(simplex,)]
        for k in range(1, len(simplex)):
            for face in combinations(simplex, k):
                chains.extend(chain + (simplex,) for chain in flags(face))
        return tuple(chains)

    new_simplices = [tuple(label[s] for s in chain) for simplex in cells for chain in flags(simplex)]
    subdivided = SimplicialComplex(range(len(cells)), new_simplices)
    action = tuple(
        {label[s]: label[K.act_simplex(g, s)] for s in cells}
        for g in range(K.group.order)
    )

    def flag_orientation(o: Orientation) -> Orientation:
        signs = o.normalized().top_signs
        d = len(next(iter(signs))) - 1 if signs else 0
        reversal = (-1) ** (d * (d + 1) // 2)
        top = {}
        for simplex in sorted(signs):
            for chain in flags(simplex):
                if len(chain) != d + 1:
                    continue
                added = [chain[0][0]] + [next(v for v in chain[k] if v not in chain[k - 1]) for k in range(1, d + 1)]
                sign = signs[simplex] * permutation_sign(list(reversed(added))) * reversal
                top[tuple(sorted(label[s] for s in chain))] = sign
        return Orientation(top)

    orientation = flag_orientation(K.orientation) if K.orientation is not None else None
    fixed = {g: flag_orientation(o) for g, o in K.fixed_orientations.items()}
    logger.debug(f"[gspace] 细分 {K.name}: f={X.f_vector()} -> {subdivided.f_vector()}")
    return GComplex(subdivided, K.group, action, orientation, fixed, name=K.name)


# ==================== 不动点子复形 ====================

def fixed_subcomplex(K: GComplex, g: int) -> Tuple[SimplicialComplex, GComplex]:
    """
    g 逐点固定的单形构成的子复形，以及中心化子 Γ_g 在其上的剩余作用

    Returns:
        (M_g, Γ_g 作用的 GComplex)；剩余作用的群是中心化子子群，embedding 指回原群

    Raises:
        NotRegular: K 不是 regular 的
    """
    G = K.group
    G.check(g)
    require_regular(K)
    simplices = [s for s in K.complex.all_simplices() if K.fixes_pointwise(g, s)]
    fixed = SimplicialComplex((), simplices)

    cent = centralizer(G, g)
    H = cent.as_group()
    vertices = fixed.vertices
    action = tuple({v: K.action[H.embedding[h]][v] for v in vertices} for h in range(H.order))
    residual = GComplex(
        fixed, H, action,
        orientation=fixed_orientation(K, g, fixed),
        name=f"{K.name}[g={g}]",
    )
    return fixed, residual


def fixed_orientation(K: GComplex, g: int, fixed: SimplicialComplex) -> Optional[Orientation]:
    """
    不动点子复形的定向：

    - 0 维（含空集）取正定向
    - 与整个复形相同时取复形自身的定向
    - 否则取用户按元素 id 提供的定向
    """
    if fixed.dim <= 0:
        return positive_orientation(fixed)
    if fixed == K.complex:
        return K.orientation
    return K.fixed_orientations.get(g)


def orientation_preserved(K: GComplex, o: Orientation, members: Optional[Iterable[int]] = None) -> bool:
    """给定元素（默认全群）是否把带符号顶维链映到自身"""
    signs = o.normalized().top_signs
    X = K.complex
    for h in members if members is not None else range(K.group.order):
        for simplex in X.simplices(X.dim):
            image = K.act_simplex(h, simplex)
            if signs.get(image, 0) != signs.get(simplex, 0) * K.transport_sign(h, simplex):
                return False
    return True


# ==================== 商复形 ====================

class QuotientComplex:
    """
    regular 作用的轨道 Δ-复形

    每个轨道取最小单形作代表；代表单形 ρ 的面 τ 落在轨道 [ρ'] 中，τ = h·ρ'，
    面映射符号为 h 把 ρ' 的升序顶点送到 τ 时的置换符号（regular 保证与 h 的选择无关）。
    """

    def __init__(self, K: GComplex):
        require_regular(K)
        X = K.complex
        self.dim = X.dim
        self.cells: List[List[Simplex]] = []
        self._orbit_of: Dict[Simplex, Tuple[int, int]] = {}
        for k in range(X.dim + 1):
            reps: List[Simplex] = []
            for simplex in X.simplices(k):
                if simplex in self._orbit_of:
                    continue
                idx = len(reps)
                reps.append(simplex)
                for h in range(K.group.order):
                    image = K.act_simplex(h, simplex)
                    if image not in self._orbit_of:
                        self._orbit_of[image] = (idx, K.transport_sign(h, simplex))
            self.cells.append(reps)

    def count(self, k: int) -> int:
        return len(self.cells[k]) if 0 <= k <= self.dim else 0

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * len(level) for k, level in enumerate(self.cells))

    def boundary(self, k: int) -> SparseRationalMatrix:
        """∂_k: C_k -> C_{k-1}（行为 (k-1)-cell，列为 k-cell）"""
        matrix = SparseRationalMatrix(self.count(k - 1), self.count(k))
        if k <= 0 or k > self.dim:
            return matrix
        for j, rep in enumerate(self.cells[k]):
            for i, face in enumerate(faces(rep)):
                row, sign = self._orbit_of[face]
                matrix.add(row, j, (-1) ** i * sign)
        return matrix

    def coboundary(self, k: int) -> SparseRationalMatrix:
        """δ_k: C^k -> C^{k+1}"""
        return self.boundary(k + 1).transpose()


def quotient_complex(K: GComplex) -> QuotientComplex:
    """
    Raises:
        NotRegular: K 不是 regular 的
    """
    quotient = QuotientComplex(K)
    logger.debug(f"[gspace] 商复形 {K.name}: cells={[len(c) for c in quotient.cells]}")
    return quotient


# ==================== 常用构造 ====================

def point_space(G: FiniteGroup, name: str = "point") -> GComplex:
    return trivial_action(SimplicialComplex([0]), G, name=name)


def gset(G: FiniteGroup, images: Sequence[Sequence[int]], points: int, name: str = "gset") -> GComplex:
    """0 维 G-复形（有限 G-集），images 为生成元在点上的像"""
    return gcomplex_from_generators(SimplicialComplex(range(points)), G, images, name=name)


def coset_space(G: FiniteGroup, members: Iterable[int], name: str = "cosets") -> GComplex:
    """
    子群点诱导的 G-集 G/H（左陪集，g·xH = (gx)H）

    陪集按其最小元素 id 排序编号。
    """
    H = set(members)
    cosets: List[frozenset] = []
    seen = set()
    for x in range(G.order):
        if x in seen:
            continue
        coset = frozenset(G.mul(x, h) for h in H)
        seen |= coset
        cosets.append(coset)
    cosets.sort(key=min)
    label = {x: i for i, c in enumerate(cosets) for x in c}
    action = tuple(
        {i: label[G.mul(g, min(c))] for i, c in enumerate(cosets)}
        for g in range(G.order)
    )
    return GComplex(SimplicialComplex(range(len(cosets))), G, action, name=name)


def polygon(n: int) -> Tuple[SimplicialComplex, Orientation]:
    """n 边形边界（圆周），标准定向：(i, i+1) 为 +，(0, n-1) 为 -"""
    edges = [(i, i + 1) for i in range(n - 1)] + [(0, n - 1)]
    signs = {(i, i + 1): 1 for i in range(n - 1)}
    signs[(0, n - 1)] = -1
    return SimplicialComplex(range(n), edges), Orientation(signs)


def simplex_boundary(d: int) -> Tuple[SimplicialComplex, Orientation]:
    """(d+1)-单形的边界（d 维球面），去掉第 i 个顶点的面取 (-1)^i"""
    full = tuple(range(d + 2))
    facets = faces(full)
    return SimplicialComplex(range(d + 2), facets), Orientation({f: (-1) ** i for i, f in enumerate(facets)})


def torus7() -> Tuple[SimplicialComplex, Orientation]:
    """7 顶点极小环面，定向三角形 (i, i+1, i+3) 与 (i, i+3, i+2)（mod 7）"""
    oriented = []
    for i in range(7):
        oriented.append((i, (i + 1) % 7, (i + 3) % 7))
        oriented.append((i, (i + 3) % 7, (i + 2) % 7))
    signs = {tuple(sorted(t)): permutation_sign(t) for t in oriented}
    return SimplicialComplex(range(7), oriented), Orientation(signs)


def octahedron() -> Tuple[SimplicialComplex, Orientation]:
    """八面体边界；顶点 0=+x,1=-x,2=+y,3=-y,4=+z,5=-z，三角形符号为各顶点奇偶符号之积"""
    triangles = [(a, b, c) for a in (0, 1) for b in (2, 3) for c in (4, 5)]
    signs = {t: (-1) ** sum(v % 2 for v in t) for t in triangles}
    return SimplicialComplex(range(6), triangles), Orientation(signs)
