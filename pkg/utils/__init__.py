"""
検査プリセット・実行履歴・バッチ実行
"""
