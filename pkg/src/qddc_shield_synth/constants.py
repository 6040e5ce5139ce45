DEFAULT_HORIZON = 10
DEFAULT_DM = True
DEFAULT_MAX_STATES = 1_000_000
MAX_LETTER_VARS = 16
DEFAULT_SEED = 2019
DEFAULT_SIMULATION_STEPS = 100_000
DEFAULT_OUTPUT_DIR = "output"
DEFAULT_REPORT_TABLE = "reports.csv"

SSEOK = "SSEOK"
DEVIATION = "Deviation"

EXIT_OK = 0
EXIT_UNREALIZABLE = 2
EXIT_SPEC_ERROR = 3
EXIT_CAPACITY = 4
