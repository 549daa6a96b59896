public class MatrixViewDao
{
    public void LoadView(View view)
    {
        _viewStore.Load(view);
    }
    public void ApproveView(View view)
    {
        _viewStore.Approve(view);
    }
    public void RemoveMatrix(Matrix matrix)
    {
        _matrixStore.Remove(matrix);
    }
}
