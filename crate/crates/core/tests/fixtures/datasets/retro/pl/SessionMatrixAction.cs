public class SessionMatrixAction
{
    public void CancelMatrix(Matrix matrix)
    {
        _matrixStore.Cancel(matrix);
    }
    public void FindMatrix(Matrix matrix)
    {
        _matrixStore.Find(matrix);
    }
    public void ExportMatrix(Matrix matrix)
    {
        _matrixStore.Export(matrix);
    }
    public void ListSession(Session session)
    {
        _sessionStore.List(session);
    }
}
