"""
공통 예외 계층
- exit_code는 CLI 종료 코드로 그대로 사용됨 (0 검증됨, 1 내부 오류, 2 미검증, 3 입력 오류)
"""


class ForgeError(Exception):
	exit_code = 1


class InputError(ForgeError):
	"""스키마/차원/환 불일치 등 잘못된 입력"""
	exit_code = 3


class ComputationError(ForgeError):
	"""수학적으로 일어날 수 없는 내부 불일치"""
	exit_code = 1


class VerificationError(ForgeError):
	"""계산은 끝났지만 검증을 통과하지 못함"""
	exit_code = 2
