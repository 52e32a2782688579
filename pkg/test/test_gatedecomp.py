import math
from unittest import TestCase

import numpy as np
from scipy.stats import ortho_group, unitary_group

from aqce import AqceConfig, run_aqce
from gatedecomp import (FIXED_GATES, MAGIC, CircuitFormatError, DecompositionError, ElementaryCircuit,
  Su2Euler, decompose_circuit, decompose_o4, kron_factor, magic_conjugate, ry, rz, wrap_angle, zyz_angles)
from statesim import StateVector, TwoQubitGate, apply_gate
from terms import CoefficientSet, build_target, induced_coefficients

SWAP = FIXED_GATES['SWAP'].real
Z = np.diag([1.0, -1.0])
X = np.array([[0.0, 1.0], [1.0, 0.0]])


def up_to_sign(a, b):
  return min(np.linalg.norm(a - b), np.linalg.norm(a + b))


class MagicBasisTests(TestCase):

  def test_unitary(self):
    """Test the magic matrix is unitary"""

    np.testing.assert_allclose(MAGIC @ MAGIC.conj().T, np.eye(4), atol=1e-15)

  def test_identity(self):
    """Test the identity conjugates to I (x) I"""

    conjugated, sign = magic_conjugate(np.eye(4))

    self.assertEqual(sign, 1)
    np.testing.assert_allclose(conjugated, np.eye(4), atol=1e-15)

  def test_swap(self):
    """Test SWAP takes the determinant -1 branch and still factors"""

    conjugated, sign = magic_conjugate(SWAP)
    a, b, phase = kron_factor(conjugated)

    self.assertEqual(sign, -1)
    np.testing.assert_allclose(np.exp(1j * phase) * np.kron(a, b), conjugated, atol=1e-12)

  def test_random_orthogonal(self):
    """Test random O(4) matrices become tensor products"""

    rng = np.random.default_rng(4)
    for _ in range(100):
      conjugated, _ = magic_conjugate(ortho_group.rvs(4, random_state=rng))
      a, b, phase = kron_factor(conjugated)
      self.assertLess(np.linalg.norm(conjugated - np.exp(1j * phase) * np.kron(a, b)), 1e-9)

  def test_errors(self):
    """Test non-orthogonal and wrongly shaped inputs are rejected"""

    with self.assertRaises(DecompositionError):
      magic_conjugate(2 * np.eye(4))
    with self.assertRaises(DecompositionError):
      magic_conjugate(np.eye(2))


class KronFactorTests(TestCase):

  def test_identity(self):
    """Test I4 splits into I2 (x) I2"""

    a, b, phase = kron_factor(np.eye(4))

    np.testing.assert_allclose(a, np.eye(2), atol=1e-15)
    np.testing.assert_allclose(b, np.eye(2), atol=1e-15)
    self.assertAlmostEqual(phase, 0.0)

  def test_z_x(self):
    """Test Z (x) X splits into special unitary multiples of Z and X"""

    c = np.kron(Z, X)
    a, b, phase = kron_factor(c)

    self.assertAlmostEqual(abs(np.trace(a.conj().T @ Z)), 2.0)
    self.assertAlmostEqual(abs(np.trace(b.conj().T @ X)), 2.0)
    self.assertAlmostEqual(np.linalg.det(a), 1.0)
    self.assertAlmostEqual(np.linalg.det(b), 1.0)
    np.testing.assert_allclose(np.exp(1j * phase) * np.kron(a, b), c, atol=1e-12)

  def test_random_products(self):
    """Test random unitary products reconstruct"""

    rng = np.random.default_rng(8)
    for _ in range(50):
      a0, b0 = unitary_group.rvs(2, random_state=rng), unitary_group.rvs(2, random_state=rng)
      c = np.kron(a0, b0)
      a, b, phase = kron_factor(c)
      self.assertLess(np.linalg.norm(c - np.exp(1j * phase) * np.kron(a, b)), 1e-10)
      self.assertAlmostEqual(np.linalg.det(a), 1.0, delta=1e-12)
      self.assertAlmostEqual(np.linalg.det(b), 1.0, delta=1e-12)

  def test_entangling(self):
    """Test CNOT has no tensor-product structure"""

    with self.assertRaises(DecompositionError):
      kron_factor(FIXED_GATES['CNOT'])


class ZyzTests(TestCase):

  def test_identity(self):
    """Test I gives (0, 0, 0)"""

    euler = zyz_angles(np.eye(2))

    self.assertEqual((euler.alpha, euler.beta, euler.gamma), (0.0, 0.0, 0.0))

  def test_ry(self):
    """Test Ry(0.7) gives (0, 0.7, 0)"""

    euler = zyz_angles(ry(0.7))

    self.assertAlmostEqual(euler.alpha, 0.0, delta=1e-15)
    self.assertAlmostEqual(euler.beta, 0.7, delta=1e-15)
    self.assertAlmostEqual(euler.gamma, 0.0, delta=1e-15)

  def test_round_trip(self):
    """Test Rz(0.3) Ry(1.1) Rz(-0.4) recovers its angles"""

    a = rz(0.3) @ ry(1.1) @ rz(-0.4)
    euler = zyz_angles(a)

    self.assertAlmostEqual(euler.alpha, 0.3, delta=1e-12)
    self.assertAlmostEqual(euler.beta, 1.1, delta=1e-12)
    self.assertAlmostEqual(euler.gamma, -0.4, delta=1e-12)
    self.assertLess(up_to_sign(euler.matrix(), a), 1e-12)

  def test_gimbal_lock(self):
    """Test beta = 0 and beta = pi still reconstruct"""

    for a in (rz(1.3), ry(math.pi), rz(0.2) @ ry(math.pi) @ rz(0.9)):
      euler = zyz_angles(a)
      self.assertLess(up_to_sign(euler.matrix(), a), 1e-12)

  def test_random(self):
    """Test random SU(2) matrices reconstruct with beta in [0, pi]"""

    rng = np.random.default_rng(12)
    for _ in range(100):
      u = unitary_group.rvs(2, random_state=rng)
      u = u / np.sqrt(np.linalg.det(u))
      euler = zyz_angles(u)
      self.assertTrue(0 <= euler.beta <= math.pi)
      self.assertLess(up_to_sign(euler.matrix(), u), 1e-10)

  def test_not_special(self):
    """Test a determinant other than 1 is rejected"""

    with self.assertRaises(DecompositionError):
      zyz_angles(Z)

  def test_euler_matrix(self):
    """Test Su2Euler builds Rz Ry Rz"""

    np.testing.assert_allclose(Su2Euler(0.1, 0.2, 0.3).matrix(), rz(0.1) @ ry(0.2) @ rz(0.3))


class DecomposeTests(TestCase):

  def setUp(self):
    """Before every test"""

    self.rng = np.random.default_rng(31)

  def test_identity(self):
    """Test the identity decomposes to zero angles and simulates to I"""

    circ = decompose_o4(TwoQubitGate.identity(1, 0))

    np.testing.assert_allclose(circ.unitary(), np.eye(4), atol=1e-10)
    for op in circ.ops:
      if op.angle is not None:
        self.assertAlmostEqual(op.angle, 0.0, delta=1e-12)

  def test_cnot(self):
    """Test CNOT as an O(4) gate is reproduced"""

    circ = decompose_o4(TwoQubitGate(FIXED_GATES['CNOT'].real, 1, 0))

    np.testing.assert_allclose(circ.unitary(), FIXED_GATES['CNOT'], atol=1e-9)

  def test_round_trip(self):
    """Test random O(4) gates re-simulate exactly with six rotations each"""

    signs = set()
    for _ in range(200):
      g = ortho_group.rvs(4, random_state=self.rng)
      circ = decompose_o4(TwoQubitGate(g, 1, 0))
      signs.add(round(np.linalg.det(g)))
      self.assertEqual(circ.rotation_count, 6)
      self.assertEqual(circ.count('RY'), 2)
      self.assertLess(np.linalg.norm(circ.unitary() - g), 1e-9)
    self.assertEqual(signs, {1, -1})

  def test_clifford_counts(self):
    """Test the Clifford frame is constant per determinant branch"""

    plus = decompose_o4(TwoQubitGate(np.eye(4), 1, 0))
    minus = decompose_o4(TwoQubitGate(SWAP, 1, 0))

    clifford = ('H', 'S', 'SDG', 'CNOT', 'SWAP')
    self.assertEqual(plus.count(*clifford), 8)
    self.assertEqual(minus.count(*clifford), 9)
    self.assertEqual(minus.count('SWAP'), 1)

  def test_qubit_order(self):
    """Test a gate on (0, 1) is the qubit-swapped matrix"""

    g = ortho_group.rvs(4, random_state=self.rng)
    circ = decompose_o4(TwoQubitGate(g, 0, 1))

    self.assertLess(np.linalg.norm(circ.unitary() - SWAP @ g @ SWAP), 1e-9)

  def test_embedded(self):
    """Test a gate on non-adjacent qubits of a larger register"""

    amps = self.rng.standard_normal(16)
    state = StateVector(amps / np.linalg.norm(amps), 4)
    gate = TwoQubitGate(ortho_group.rvs(4, random_state=self.rng), 3, 1)

    circ = decompose_o4(gate, 4)

    np.testing.assert_allclose(circ.apply(state.amps), apply_gate(state, gate).amps, atol=1e-9)

  def test_aqce_circuit(self):
    """Test a lowered AQCE circuit reproduces its coefficients"""

    values = self.rng.random(16) + 0.05
    cs = CoefficientSet.from_values(values / values.sum(), 1e-4)
    aqce_circ = run_aqce(build_target(cs), AqceConfig())

    circ = decompose_circuit(aqce_circ)

    self.assertEqual(circ.rotation_count, 6 * aqce_circ.M)
    self.assertEqual(circ.count('RY'), 2 * aqce_circ.M)
    expected = induced_coefficients(aqce_circ.state(), cs)
    np.testing.assert_allclose(induced_coefficients(circ.simulate(), cs), expected, atol=1e-9)


class ElementaryCircuitTests(TestCase):

  def test_counts(self):
    """Test gate counting helpers"""

    circ = ElementaryCircuit(2)
    circ.append('h', 0)
    circ.append('T', 1)
    circ.append('TDG', 0)
    circ.append('CNOT', 0, 1)

    self.assertEqual(circ.t_count, 2)
    self.assertEqual(circ.two_qubit_count, 1)
    self.assertTrue(circ.is_clifford_t())
    circ.append('RZ', 0, angle=0.1)
    self.assertFalse(circ.is_clifford_t())

  def test_angles_wrapped(self):
    """Test rotation angles are reduced to (-pi, pi]"""

    circ = ElementaryCircuit(1)

    self.assertAlmostEqual(circ.append('RZ', 0, angle=3 * math.pi).angle, math.pi)
    self.assertAlmostEqual(circ.append('RY', 0, angle=-math.pi).angle, math.pi)
    self.assertEqual(wrap_angle(0.5), 0.5)

  def test_append_errors(self):
    """Test invalid gates, qubits and angles are rejected"""

    circ = ElementaryCircuit(2)
    for name, qubits, angle in [('FOO', (0,), None), ('CNOT', (0,), None), ('CNOT', (1, 1), None),
        ('H', (2,), None), ('RZ', (0,), None), ('H', (0,), 0.5), ('RZ', (0,), float('inf'))]:
      with self.subTest(name=name, qubits=qubits):
        with self.assertRaises(DecompositionError):
          circ.append(name, *qubits, angle=angle)

  def test_phase(self):
    """Test the global phase multiplies the simulated state"""

    circ = ElementaryCircuit(1, phase=0.5)
    circ.append('X', 0)

    np.testing.assert_allclose(circ.simulate(), [0, np.exp(0.5j)])

  def test_extend(self):
    """Test extending concatenates ops and sums phases"""

    first, second = ElementaryCircuit(2, phase=0.25), ElementaryCircuit(2, phase=0.5)
    first.append('H', 0)
    second.append('CNOT', 0, 1)

    first.extend(second)

    self.assertEqual([op.name for op in first.ops], ['H', 'CNOT'])
    self.assertAlmostEqual(first.phase, 0.75)

  def test_text_round_trip(self):
    """Test a decomposed circuit survives the text format"""

    g = ortho_group.rvs(4, random_state=np.random.default_rng(6))
    circ = decompose_o4(TwoQubitGate(g, 2, 0), 3)

    parsed = ElementaryCircuit.from_text(circ.to_text())

    self.assertEqual(parsed.m, 3)
    self.assertEqual(parsed.ops, circ.ops)
    self.assertEqual(parsed.phase, circ.phase)

  def test_text_format(self):
    """Test the documented line format"""

    circ = ElementaryCircuit.from_text('CNOT 0,1\nRZ 2 0.78539816339\n')

    self.assertEqual(circ.m, 3)
    self.assertEqual(circ.ops[0].qubits, (0, 1))
    self.assertEqual(circ.ops[1].angle, 0.78539816339)
    self.assertEqual(ElementaryCircuit.from_text(circ.ops[1].to_text(), m=3).ops, circ.ops[1:])

  def test_text_errors(self):
    """Test malformed circuit text raises CircuitFormatError"""

    for text in ['FOO 0\n', 'H\n', 'H a\n', 'RZ 0 nan\n', 'H 0 1 2\n', 'CNOT 1,1\n', 'RZ 0\n',
        '# qubits x\n', 'H -1\n']:
      with self.subTest(text=text):
        with self.assertRaises(CircuitFormatError):
          ElementaryCircuit.from_text(text)

  def test_register_override(self):
    """Test m overrides the header and bounds the qubit indices"""

    with self.assertRaises(CircuitFormatError):
      ElementaryCircuit.from_text('# qubits 3\nH 2\n', m=2)
    self.assertEqual(ElementaryCircuit.from_text('H 0\n', m=4).m, 4)
