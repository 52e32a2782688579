import logging
from unittest import TestCase

from click.testing import CliRunner

from app import cli


class RootTests(TestCase):

  def setUp(self):
    """Before every test"""

    self.runner = CliRunner()

  def tearDown(self):
    root = logging.getLogger()
    root.handlers.clear() # handlers point at the runner's closed streams
    root.setLevel(logging.WARNING)

  def test_help(self):
    """Verify the group lists every command"""

    result = self.runner.invoke(cli, ['--help'])

    self.assertEqual(result.exit_code, 0)
    for command in ('synth', 'bench', 'cost', 'verify', 'gen'):
      self.assertIn(command, result.output)

  def test_unknown_command(self):
    """Verify usage errors exit with 1 and a machine-parsable reason"""

    result = self.runner.invoke(cli, ['prepare'])

    self.assertEqual(result.exit_code, 1)
    self.assertIn('error reason=usage', result.output)

  def test_missing_option(self):
    """Verify a missing required option exits with 1"""

    result = self.runner.invoke(cli, ['synth'])

    self.assertEqual(result.exit_code, 1)
    self.assertIn('error reason=usage', result.output)

  def test_bad_log_level(self):
    """Verify an unknown log level is a usage error"""

    result = self.runner.invoke(cli, ['--log-level', 'LOUD', 'cost', '--molecule', 'H2'])

    self.assertEqual(result.exit_code, 1)

  def test_log_level(self):
    """Verify the log level configures the root logger"""

    with self.runner.isolated_filesystem():
      result = self.runner.invoke(cli, ['--log-level', 'debug', 'gen', '--L', '3', '--out', 'x.txt'])

    self.assertEqual(result.exit_code, 0)
    self.assertEqual(logging.getLogger().level, logging.DEBUG)
