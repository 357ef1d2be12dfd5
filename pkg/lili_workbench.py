"""
LILI-128 ワークベンチ - メインエントリーポイント

キーストリーム生成、二通りのフィルタ表現の等価性検証、
既知初期状態からのフィルタ関数再構成、必要ビット数の実験を行う。
"""

import os
import sys

# プロジェクトルートをパスに追加
project_root = os.path.dirname(os.path.abspath(__file__))
sys.path.insert(0, project_root)


def check_dependencies() -> bool:
    """依存関係の確認"""
    missing_packages = []

    try:
        from dotenv import load_dotenv
        load_dotenv()  # .envファイルを読み込み
    except ImportError:
        missing_packages.append("python-dotenv")

    for module, package in (
        ("numpy", "numpy"),
        ("bitarray", "bitarray"),
        ("gmpy2", "gmpy2"),
        ("pydantic", "pydantic"),
        ("jinja2", "jinja2"),
    ):
        try:
            __import__(module)
        except ImportError:
            missing_packages.append(package)

    if missing_packages:
        sys.stderr.write("以下のパッケージがインストールされていません:\n")
        for pkg in missing_packages:
            sys.stderr.write(f"pip install {pkg}\n")
        return False
    return True


def main() -> int:
    """メイン関数"""
    if not check_dependencies():
        return 3

    from src.cli.main_controller import main as run_cli
    return run_cli(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
