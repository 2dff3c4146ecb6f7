int scorewin_placeholder_test_bandit;
