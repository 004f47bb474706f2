"""
异常定义

所有库内错误都继承 DelocError；报告型操作（validate_* / check_*）不抛这些异常，
而是把违例写进报告。
"""


class DelocError(Exception):
    """库内错误基类"""


class InputError(DelocError):
    """输入文件格式错误"""


class CapExceeded(DelocError):
    """枚举规模超过配置上限"""


class ClosureCapExceeded(CapExceeded):
    """置换群闭包超过元素上限"""


class NotBijective(DelocError):
    """生成元不是同一有限集上的双射"""


class ElementNotInGroup(DelocError):
    """元素 id 不属于该群"""


class NotRegular(DelocError):
    """群作用不是 regular 的（某元素整体固定单形但不逐点固定）"""


class NotPure(DelocError):
    """复形不是纯的（存在非顶维极大单形）"""


class DegreeOutOfRange(DelocError):
    """上同调次数超出允许范围"""


class ComplexMismatch(DelocError):
    """两个上链不在同一个复形上"""


class NotOriented(DelocError):
    """不动点子复形没有有效（且被中心化子保持）的定向"""


class OrientationMissing(NotOriented):
    """umkehr 所需的定向数据缺失"""


class DegreeMismatch(DelocError):
    """配对的两个类次数之和不等于流形维数"""


class NotEquivariant(DelocError):
    """映射不是等变单纯映射"""


class InvalidBundle(DelocError):
    """平坦等变丛数据不满足 cocycle 条件"""


class PairNotPreserved(DelocError):
    """光滑映射不保持子流形对 (R^p x 0)"""
