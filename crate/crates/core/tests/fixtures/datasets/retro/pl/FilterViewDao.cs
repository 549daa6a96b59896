public class FilterViewDao
{
    public void SaveFilter(Filter filter)
    {
        _filterStore.Save(filter);
    }
    public void CancelFilter(Filter filter)
    {
        _filterStore.Cancel(filter);
    }
}
