import math
import os
import tempfile
from unittest import TestCase

import numpy as np

from statesim import StateVector
from terms import (PAULI_TERMS, CoefficientSet, TargetState, TermsError, build_target, epsilon_budget,
  induced_coefficients, load_terms, max_coeff_error, parse_terms)


class LoadTermsTests(TestCase):

  def setUp(self):
    """Before every test"""

    self.dir = tempfile.TemporaryDirectory()

  def tearDown(self):
    self.dir.cleanup()

  def write(self, text, name='terms.txt'):
    path = os.path.join(self.dir.name, name)
    with open(path, 'w', encoding='utf-8', newline='') as f:
      f.write(text)
    return path

  def test_signed_values(self):
    """Test magnitudes are taken and sorted descending"""

    cs = load_terms(self.write('0.5\n-0.25\n0.25\n'))

    np.testing.assert_array_equal(cs.coeffs, [0.5, 0.25, 0.25])
    self.assertEqual(cs.L, 3)
    self.assertEqual(cs.m, 2)
    self.assertEqual(cs.lam, 1.0)
    self.assertIsNone(cs.epsilon)

  def test_single_pauli_term(self):
    """Test one Pauli term clamps m to one qubit"""

    cs = load_terms(self.write('2.0 ZZ\n'), PAULI_TERMS)

    np.testing.assert_array_equal(cs.coeffs, [2.0])
    self.assertEqual(cs.L, 1)
    self.assertEqual(cs.m, 1)
    self.assertEqual(cs.lam, 2.0)

  def test_fourteen_terms(self):
    """Test 14 terms need 4 qubits"""

    values = np.random.default_rng(14).random(14) + 0.01
    cs = load_terms(self.write(''.join(f'{v:.17g}\n' for v in values)))

    self.assertEqual(cs.L, 14)
    self.assertEqual(cs.m, 4)
    self.assertEqual(sorted(cs.coeffs), sorted(values)) # sorting is a permutation

  def test_comments_crlf_and_zeros(self):
    """Test comments, CRLF line endings and zero terms"""

    cs = load_terms(self.write('# header\r\n0.1 # trailing\r\n0\r\n\r\n-0.3\r\n'))

    np.testing.assert_array_equal(cs.coeffs, [0.3, 0.1])

  def test_stable_ties(self):
    """Test equal magnitudes keep file order"""

    cs = parse_terms('-0.2 XI\n0.2 IZ\n0.5 YY\n', PAULI_TERMS)

    np.testing.assert_array_equal(cs.coeffs, [0.5, 0.2, 0.2])

  def test_errors(self):
    """Test malformed, empty and all-zero inputs are rejected"""

    for text, fmt in [('abc\n', 'coeff-list'), ('1.0 2.0\n', 'coeff-list'), ('nan\n', 'coeff-list'),
        ('', 'coeff-list'), ('# only comments\n', 'coeff-list'), ('0\n0.0\n', 'coeff-list'),
        ('1.0 ZQ\n', PAULI_TERMS), ('1.0\n', PAULI_TERMS)]:
      with self.subTest(text=text):
        with self.assertRaises(TermsError):
          parse_terms(text, fmt)

  def test_missing_file(self):
    """Test a missing file raises TermsError"""

    with self.assertRaises(TermsError):
      load_terms(os.path.join(self.dir.name, 'nope.txt'))


class CoefficientSetTests(TestCase):

  def test_invariants(self):
    """Test unsorted or non-positive coefficients are rejected"""

    with self.assertRaises(TermsError):
      CoefficientSet(np.array([0.1, 0.2]))
    with self.assertRaises(TermsError):
      CoefficientSet(np.array([0.2, 0.0]))

  def test_lambda(self):
    """Test lambda is the sum of coefficients"""

    cs = CoefficientSet.from_values([0.1] * 10)

    self.assertAlmostEqual(cs.lam, 1.0, delta=1e-12)


class TargetTests(TestCase):

  def test_single_term(self):
    """Test one coefficient gives |0> on one qubit"""

    target = build_target(CoefficientSet.from_values([1.0]))

    np.testing.assert_array_equal(target.amplitudes, [1.0, 0.0])
    self.assertEqual(target.m, 1)

  def test_two_equal_terms(self):
    """Test [0.5, 0.5] gives the uniform superposition"""

    target = build_target(CoefficientSet.from_values([0.5, 0.5]))

    np.testing.assert_allclose(target.amplitudes, [math.sqrt(0.5)] * 2, atol=1e-15)

  def test_padding(self):
    """Test slots beyond L are zero"""

    target = build_target(CoefficientSet.from_values([0.5, 0.3, 0.2]))

    np.testing.assert_allclose(target.amplitudes, np.sqrt([0.5, 0.3, 0.2, 0.0]), atol=1e-15)
    self.assertAlmostEqual(float(target.amplitudes @ target.amplitudes), 1.0, delta=1e-12)

  def test_round_trip(self):
    """Test build_target then induced_coefficients recovers the coefficients"""

    cs = CoefficientSet.from_values(np.random.default_rng(3).random(37) + 0.01)
    cprime = induced_coefficients(build_target(cs).amplitudes, cs)

    self.assertLess(max_coeff_error(cs, cprime), 1e-12)
    self.assertAlmostEqual(cprime.sum(), cs.lam, delta=1e-10)

  def test_not_normalized(self):
    """Test a target must be normalized"""

    with self.assertRaises(TermsError):
      TargetState(np.array([1.0, 1.0]))


class MetricTests(TestCase):

  def test_uniform_state(self):
    """Test the uniform state against [0.5, 0.25, 0.25]"""

    cs = CoefficientSet.from_values([0.5, 0.25, 0.25])
    cprime = induced_coefficients(StateVector(np.full(4, 0.5), 2), cs)

    np.testing.assert_allclose(cprime, [0.25] * 4)
    self.assertAlmostEqual(max_coeff_error(cs, cprime), 0.25)

  def test_leakage(self):
    """Test weight outside the first L slots counts as error"""

    cs = CoefficientSet.from_values([1.0])

    self.assertAlmostEqual(max_coeff_error(cs, [0.9, 0.1]), 0.1)
    self.assertEqual(max_coeff_error(cs, [1.0, 0.0]), 0.0)

  def test_unnormalized_state(self):
    """Test induced coefficients need a normalized state"""

    with self.assertRaises(TermsError):
      induced_coefficients(np.array([1.0, 1.0]), CoefficientSet.from_values([1.0]))


class EpsilonBudgetTests(TestCase):

  def test_h2_shape(self):
    """Test L=14, lambda=10 at chemical accuracy"""

    cs = CoefficientSet.from_values([10 / 14] * 14)

    self.assertAlmostEqual(epsilon_budget(cs, 0.0016), 4.0406101653e-5, delta=1e-14)

  def test_single_term(self):
    """Test the L=1, lambda=1 closed form"""

    cs = CoefficientSet.from_values([1.0])
    delta_e = 0.3

    self.assertAlmostEqual(epsilon_budget(cs, delta_e), math.sqrt(2) * delta_e / (4 * (1 + delta_e ** 2 / 8)))

  def test_monotone(self):
    """Test the budget grows with delta_e and shrinks with L"""

    budgets = [epsilon_budget(CoefficientSet.from_values([1.0] * L), d) for L in (1, 4, 16) for d in (1e-4, 1e-3, 1e-2)]

    for row in range(3):
      self.assertLess(budgets[3 * row], budgets[3 * row + 1])
      self.assertLess(budgets[3 * row + 1], budgets[3 * row + 2])
    for col in range(3):
      self.assertGreater(budgets[col], budgets[3 + col])
      self.assertGreater(budgets[3 + col], budgets[6 + col])
    self.assertLess(epsilon_budget(CoefficientSet.from_values([1.0]), 1e-12), 1e-12)

  def test_bad_delta_e(self):
    """Test delta_e must be positive"""

    with self.assertRaises(TermsError):
      epsilon_budget(CoefficientSet.from_values([1.0]), 0)
